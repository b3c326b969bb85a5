// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "raypriors/mlp.hpp"

// Checkpoint blobs are little-endian with 32-bit float storage; weight
// matrices are written row-major. Round-trips are bit-exact.

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace rp {

namespace io {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: unexpected end of stream");
    return v;
}

inline void write_matrix(std::ostream& out, const MatXf& m) {
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) write_pod(out, m(r, c));
}

inline void read_matrix(std::istream& in, MatXf& m) {
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c) m(r, c) = read_pod<float>(in);
}

}  // namespace io

inline void write_mlp_blob(std::ostream& out, const Mlp<float>& mlp) {
    io::write_pod(out, static_cast<uint32_t>(mlp.layers.size()));
    for (const auto& l : mlp.layers) {
        io::write_pod(out, static_cast<uint32_t>(l.weight.cols()));
        io::write_pod(out, static_cast<uint32_t>(l.weight.rows()));
        io::write_pod(out, static_cast<uint8_t>(l.act));
    }
    for (const auto& l : mlp.layers) {
        io::write_matrix(out, l.weight);
        MatXf b = l.bias;
        io::write_matrix(out, b);
    }
}

inline Mlp<float> read_mlp_blob(std::istream& in) {
    Mlp<float> mlp;
    const auto n = io::read_pod<uint32_t>(in);
    mlp.layers.resize(n);
    for (auto& l : mlp.layers) {
        const auto in_dim = io::read_pod<uint32_t>(in);
        const auto out_dim = io::read_pod<uint32_t>(in);
        l.act = static_cast<Activation>(io::read_pod<uint8_t>(in));
        l.weight.resize(out_dim, in_dim);
        l.bias.resize(out_dim);
    }
    for (auto& l : mlp.layers) {
        io::read_matrix(in, l.weight);
        MatXf b(l.bias.size(), 1);
        io::read_matrix(in, b);
        l.bias = b;
    }
    return mlp;
}

inline void write_adam_blob(std::ostream& out, const AdamState<float>& st) {
    io::write_pod(out, static_cast<int64_t>(st.step));
    io::write_pod(out, st.beta1);
    io::write_pod(out, st.beta2);
    io::write_pod(out, st.eps);
    io::write_pod(out, st.lr);
    io::write_pod(out, static_cast<uint32_t>(st.m.size()));
    auto dump = [&](const std::vector<LayerTensors<float>>& ts) {
        for (const auto& t : ts) {
            io::write_matrix(out, t.weight);
            MatXf b = t.bias;
            io::write_matrix(out, b);
        }
    };
    dump(st.m);
    dump(st.v);
}

inline AdamState<float> read_adam_blob(std::istream& in, const Mlp<float>& shapes) {
    AdamState<float> st = make_adam_state(shapes, 0.0f);
    st.step = io::read_pod<int64_t>(in);
    st.beta1 = io::read_pod<float>(in);
    st.beta2 = io::read_pod<float>(in);
    st.eps = io::read_pod<float>(in);
    st.lr = io::read_pod<float>(in);
    const auto n = io::read_pod<uint32_t>(in);
    if (n != st.m.size()) throw std::runtime_error("checkpoint: Adam shape mismatch");
    auto slurp = [&](std::vector<LayerTensors<float>>& ts) {
        for (auto& t : ts) {
            io::read_matrix(in, t.weight);
            MatXf b(t.bias.size(), 1);
            io::read_matrix(in, b);
            t.bias = b;
        }
    };
    slurp(st.m);
    slurp(st.v);
    return st;
}

struct MlpCheckpoint {
    Mlp<float> mlp;
    std::optional<AdamState<float>> adam;
};

inline constexpr char kMlpMagic[4] = {'R', 'P', 'N', 'N'};
inline constexpr uint32_t kMlpVersion = 1;

inline void save_mlp_checkpoint(const std::filesystem::path& path, const Mlp<float>& mlp,
                                const AdamState<float>* adam = nullptr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_mlp_checkpoint: cannot open " + path.string());
    out.write(kMlpMagic, 4);
    io::write_pod(out, kMlpVersion);
    write_mlp_blob(out, mlp);
    io::write_pod(out, static_cast<uint8_t>(adam != nullptr));
    if (adam) write_adam_blob(out, *adam);
    if (!out) throw std::runtime_error("save_mlp_checkpoint: write failed");
}

inline MlpCheckpoint load_mlp_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_mlp_checkpoint: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMlpMagic, 4) != 0)
        throw std::runtime_error("load_mlp_checkpoint: bad magic in " + path.string());
    if (io::read_pod<uint32_t>(in) != kMlpVersion)
        throw std::runtime_error("load_mlp_checkpoint: unsupported version");
    MlpCheckpoint ck;
    ck.mlp = read_mlp_blob(in);
    if (io::read_pod<uint8_t>(in)) ck.adam = read_adam_blob(in, ck.mlp);
    return ck;
}

}  // namespace rp
