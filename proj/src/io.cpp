#include "ghost/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace ghost::io {

namespace {

void put_u32(std::ofstream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ofstream& os, double v) {
    auto u = std::bit_cast<std::uint64_t>(v);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::ifstream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw FormatError("grid file truncated in header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

double get_f64(std::ifstream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw FormatError("grid file truncated");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(u);
}

void read_magic(std::ifstream& is, const char expect[4]) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, expect, 4) != 0)
        throw FormatError(std::string("bad magic, expected ") + std::string(expect, 4));
}

template <typename Get>
std::pair<RealGrid, std::size_t> read_header(std::ifstream& is, Get) {
    const std::uint32_t rows = get_u32(is);
    const std::uint32_t cols = get_u32(is);
    const double pitch = get_f64(is);
    if (rows == 0 || cols == 0 || !(pitch > 0.0)) throw FormatError("invalid grid header");
    return {RealGrid(rows, cols, pitch), static_cast<std::size_t>(rows) * cols};
}

}  // namespace

void write_real_grid(const std::filesystem::path& path, const RealGrid& grid) {
    for (double v : grid.values())
        if (std::isnan(v)) throw FormatError("refusing to write NaN entries");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os.write("GIG1", 4);
    put_u32(os, static_cast<std::uint32_t>(grid.rows()));
    put_u32(os, static_cast<std::uint32_t>(grid.cols()));
    put_f64(os, grid.pitch());
    for (double v : grid.values()) put_f64(os, v);
    if (!os) throw FormatError("write failed: " + path.string());
}

RealGrid read_real_grid(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    read_magic(is, "GIG1");
    auto [grid, count] = read_header(is, 0);
    for (std::size_t i = 0; i < count; ++i) grid.values()[i] = get_f64(is);
    is.peek();
    if (!is.eof()) throw FormatError("trailing bytes in " + path.string());
    return grid;
}

void write_complex_grid(const std::filesystem::path& path, const ComplexGrid& grid) {
    for (const auto& v : grid.values())
        if (std::isnan(v.real()) || std::isnan(v.imag()))
            throw FormatError("refusing to write NaN entries");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os.write("GIC1", 4);
    put_u32(os, static_cast<std::uint32_t>(grid.rows()));
    put_u32(os, static_cast<std::uint32_t>(grid.cols()));
    put_f64(os, grid.pitch());
    for (const auto& v : grid.values()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    if (!os) throw FormatError("write failed: " + path.string());
}

ComplexGrid read_complex_grid(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    read_magic(is, "GIC1");
    const std::uint32_t rows = get_u32(is);
    const std::uint32_t cols = get_u32(is);
    const double pitch = get_f64(is);
    if (rows == 0 || cols == 0 || !(pitch > 0.0)) throw FormatError("invalid grid header");
    ComplexGrid grid(rows, cols, pitch);
    for (auto& v : grid.values()) {
        const double re = get_f64(is);
        const double im = get_f64(is);
        v = {re, im};
    }
    is.peek();
    if (!is.eof()) throw FormatError("trailing bytes in " + path.string());
    return grid;
}

void write_pgm16(const std::filesystem::path& path, const RealGrid& grid) {
    double mx = 0.0;
    for (double v : grid.values()) {
        if (std::isnan(v)) throw FormatError("refusing to write NaN entries");
        mx = std::max(mx, v);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os << "P5\n" << grid.cols() << " " << grid.rows() << "\n65535\n";
    for (double v : grid.values()) {
        const double clamped = std::max(0.0, v);
        const auto q = static_cast<std::uint16_t>(
            std::lround(mx > 0.0 ? 65535.0 * std::min(1.0, clamped / mx) : 0.0));
        const unsigned char b[2] = {static_cast<unsigned char>(q >> 8),
                                    static_cast<unsigned char>(q & 0xFF)};
        os.write(reinterpret_cast<const char*>(b), 2);
    }
    if (!os) throw FormatError("write failed: " + path.string());
}

std::string format_double(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

void write_bucket_table(const std::filesystem::path& path,
                        const std::vector<std::uint64_t>& seeds,
                        const std::vector<double>& buckets) {
    if (seeds.size() != buckets.size())
        throw FormatError("bucket table: seeds and buckets differ in length");
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os << "index,seed,bucket\n";
    for (std::size_t i = 0; i < seeds.size(); ++i)
        os << i << "," << seeds[i] << "," << format_double(buckets[i]) << "\n";
}

void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<double>& x_meters,
                       const std::vector<double>& values) {
    if (x_meters.size() != values.size())
        throw FormatError("profile: x and values differ in length");
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os << "x_meters,value\n";
    for (std::size_t i = 0; i < x_meters.size(); ++i)
        os << format_double(x_meters[i]) << "," << format_double(values[i]) << "\n";
}

}  // namespace ghost::io
