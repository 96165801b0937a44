#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ghost/grid.hpp"

namespace ghost::io {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "GIG1": magic, u32 LE rows, u32 LE cols, f64 LE pitch, then rows*cols
// f64 LE values row-major. NaN entries are rejected on write.
void write_real_grid(const std::filesystem::path& path, const RealGrid& grid);
RealGrid read_real_grid(const std::filesystem::path& path);

// "GIC1": same header, interleaved (re, im) f64 pairs.
void write_complex_grid(const std::filesystem::path& path, const ComplexGrid& grid);
ComplexGrid read_complex_grid(const std::filesystem::path& path);

// 16-bit binary PGM preview, max-normalized.
void write_pgm16(const std::filesystem::path& path, const RealGrid& grid);

// Shortest round-trip decimal form of a double (deterministic).
std::string format_double(double v);

void write_bucket_table(const std::filesystem::path& path,
                        const std::vector<std::uint64_t>& seeds,
                        const std::vector<double>& buckets);

void write_profile_csv(const std::filesystem::path& path,
                       const std::vector<double>& x_meters,
                       const std::vector<double>& values);

}  // namespace ghost::io
