#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "eifg/field.hpp"

namespace eifg {

/// Nodal field dump: "EIFG", u32 version (=1), u8 dims, u64 sizes[dims],
/// f64 time, then prod(sizes) row-major f64 values. Everything little-endian.
struct Snapshot {
    std::vector<std::uint64_t> sizes;
    double time = 0.0;
    std::vector<double> values;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const PhysicalField& u, double time);
void write_snapshot(const std::filesystem::path& path, const PhysicalField& u, double time);

/// Throws IoError on a truncated stream, bad magic or unsupported version.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace eifg
