#include "eifg/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "eifg/error.hpp"

namespace eifg {

namespace {

constexpr std::array<char, 4> kMagic{'E', 'I', 'F', 'G'};

template <class U>
void put_le(std::ostream& out, U v) {
    std::array<char, sizeof(U)> bytes{};
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(bytes.data(), bytes.size());
}

template <class U>
U get_le(std::istream& in) {
    std::array<unsigned char, sizeof(U)> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw IoError("snapshot is truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
    return v;
}

}  // namespace

void write_snapshot(std::ostream& out, const PhysicalField& u, double time) {
    const Grid& g = u.grid();
    out.write(kMagic.data(), kMagic.size());
    put_le<std::uint32_t>(out, kSnapshotVersion);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(g.dims()));
    for (int axis = 0; axis < g.dims(); ++axis) put_le<std::uint64_t>(out, g.size(axis));
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(time));
    for (double v : u.values()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    if (!out) throw IoError("failed to write snapshot");
}

void write_snapshot(const std::filesystem::path& path, const PhysicalField& u, double time) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_snapshot(out, u, time);
}

Snapshot read_snapshot(std::istream& in) {
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), magic.size())) throw IoError("snapshot is truncated");
    if (magic != kMagic) throw IoError("not a snapshot file (bad magic)");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kSnapshotVersion) throw IoError("unsupported snapshot version " + std::to_string(version));
    const auto dims = get_le<std::uint8_t>(in);
    if (dims < 1 || dims > 3) throw IoError("snapshot has invalid dimension count");

    Snapshot snap;
    std::uint64_t total = 1;
    for (int i = 0; i < dims; ++i) {
        snap.sizes.push_back(get_le<std::uint64_t>(in));
        total *= snap.sizes.back();
    }
    snap.time = std::bit_cast<double>(get_le<std::uint64_t>(in));
    snap.values.resize(total);
    for (auto& v : snap.values) v = std::bit_cast<double>(get_le<std::uint64_t>(in));
    return snap;
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_snapshot(in);
}

}  // namespace eifg
