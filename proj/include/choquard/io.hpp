#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// FNV-1a 64-bit over raw bytes; used for manifest fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t bytes);
std::uint64_t fnv1a64_file(const std::string& path);

/// Raw little-endian float64 dump in row-major order plus a JSON sidecar
/// {dim, L, n, offset:"half-cell", order:"row-major"} at <path>.json.
void dump_field(const Field& u, const std::string& path);
Field load_field(const std::string& path);

/// Minimal CSV writer: one header row, then data rows.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void close();
    ~CsvWriter();

private:
    struct Impl;
    Impl* impl_;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace choquard
