// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The mmwsnr Authors

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>

#include "mmwsnr/csv.hpp"
#include "mmwsnr/error.hpp"
#include "mmwsnr/sounder.hpp"

namespace mmw::sounder {

namespace {

constexpr std::array<char, 8> kMagic{'M', 'M', 'W', 'C', 'A', 'P', '0', '1'};

template <typename U>
void put_le(std::ostream& out, U value) {
    std::array<char, sizeof(U)> bytes;
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <typename U>
U get_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> bytes;
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) throw ParseError("truncated capture file");
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

void put_iq(std::ostream& out, cplx v) {
    put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v.real())));
    put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v.imag())));
}

cplx get_iq(std::istream& in) {
    const float re = std::bit_cast<float>(get_le<std::uint32_t>(in));
    const float im = std::bit_cast<float>(get_le<std::uint32_t>(in));
    return {re, im};
}

}  // namespace

void write_capture(const std::filesystem::path& path, const Capture& cap) {
    if (cap.known_sequence.empty() || cap.samples.size() % cap.known_sequence.size() != 0)
        throw ConfigError("capture length is not a whole number of symbols");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write capture '" + path.string() + "'");
    out.write(kMagic.data(), kMagic.size());
    put_le(out, static_cast<std::uint32_t>(cap.n_points()));
    put_le(out, std::uint32_t{0});
    put_le(out, std::bit_cast<std::uint64_t>(cap.sample_rate_hz));
    put_le(out, static_cast<std::uint64_t>(cap.n_symbols()));
    for (const auto& v : cap.known_sequence) put_iq(out, v);
    for (const auto& v : cap.samples) put_iq(out, v);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Capture read_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open capture '" + path.string() + "'");
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw ParseError("'" + path.string() + "' is not a capture file (bad magic)");

    const auto n_points = get_le<std::uint32_t>(in);
    get_le<std::uint32_t>(in);
    const double rate = std::bit_cast<double>(get_le<std::uint64_t>(in));
    const auto n_symbols = get_le<std::uint64_t>(in);
    if (n_points == 0 || !(rate > 0.0)) throw ParseError("capture header has invalid n_points or sample rate");
    constexpr std::uint64_t kMaxSamples = std::uint64_t{1} << 34;
    if (n_symbols > kMaxSamples / n_points) throw ParseError("capture header declares an implausible length");

    Capture cap;
    cap.sample_rate_hz = rate;
    cap.known_sequence.resize(n_points);
    for (auto& v : cap.known_sequence) v = get_iq(in);
    cap.samples.resize(static_cast<std::size_t>(n_symbols) * n_points);
    for (auto& v : cap.samples) v = get_iq(in);
    return cap;
}

void write_pdp_header(std::ostream& out, int n_points) {
    out << "t_s";
    for (int d = 0; d < n_points; ++d) out << ",bin" << d;
    out << ",chosen_cfo_hz\n";
}

void write_pdp_row(std::ostream& out, const PdpFrame& frame) {
    out << csv::format_double(frame.t_s);
    for (const double b : frame.bins) out << ',' << csv::format_double(b);
    out << ',' << csv::format_double(frame.chosen_cfo_hz) << '\n';
}

}  // namespace mmw::sounder
