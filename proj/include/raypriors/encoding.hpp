// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>

#include "raypriors/common.hpp"

namespace rp {

constexpr Index encoding_dim(Index components, int num_freqs, bool include_input) {
    return components * (2 * num_freqs + (include_input ? 1 : 0));
}

/// Sinusoidal feature expansion. Input is components x batch; each component
/// expands to [x]? , sin(pi x), cos(pi x), sin(2 pi x), cos(2 pi x), ...
/// with frequencies 2^l pi for l in [0, num_freqs). Blocks are stacked in
/// component order.
template <typename S>
void positional_encode(const MatX<S>& x, int num_freqs,
                       bool include_input, MatX<S>& out) {
    const Index comps = x.rows();
    const Index batch = x.cols();
    const Index block = 2 * num_freqs + (include_input ? 1 : 0);
    out.resize(comps * block, batch);
    for (Index c = 0; c < comps; ++c) {
        Index row = c * block;
        if (include_input) out.row(row++) = x.row(c);
        S freq = S(kPi);
        for (int l = 0; l < num_freqs; ++l) {
            out.row(row++) = (x.row(c).array() * freq).sin();
            out.row(row++) = (x.row(c).array() * freq).cos();
            freq *= S(2);
        }
    }
}

template <typename S>
MatX<S> positional_encode(const MatX<S>& x, int num_freqs,
                          bool include_input) {
    MatX<S> out;
    positional_encode<S>(x, num_freqs, include_input, out);
    return out;
}

}  // namespace rp
