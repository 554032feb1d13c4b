#include "halfwave/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace hw {

namespace {

constexpr char kMagic[4] = {'H', 'W', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "HWF1 writer assumes a little-endian host");

template <typename T>
void put(std::string& buf, const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf.append(p, sizeof(T));
}

template <typename T>
T take(const std::string& buf, std::size_t& off) {
    if (off + sizeof(T) > buf.size())
        fail(ErrorCode::format, "HWF1: truncated file");
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    off += sizeof(T);
    return v;
}

}  // namespace

void atomic_write_bytes(const std::string& path, const void* data, std::size_t size) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".") : target.parent_path();
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path tmp = dir / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::io, "cannot open for writing: " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) fail(ErrorCode::io, "write failed: " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) fail(ErrorCode::io, "rename failed: " + target.string() + ": " + ec.message());
}

void atomic_write_text(const std::string& path, const std::string& text) {
    atomic_write_bytes(path, text.data(), text.size());
}

void save_field(const Field& f, const std::string& path) {
    std::string buf;
    buf.reserve(21 + 16 * f.size());
    buf.append(kMagic, 4);
    put(buf, kVersion);
    put(buf, static_cast<std::uint64_t>(f.grid().n()));
    put(buf, f.grid().box_length());
    put(buf, static_cast<std::uint8_t>(f.space()));
    for (const auto& v : f.values()) {
        put(buf, v.real());
        put(buf, v.imag());
    }
    atomic_write_bytes(path, buf.data(), buf.size());
}

Field load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0)
        fail(ErrorCode::format, "HWF1: bad magic in " + path);
    std::size_t off = 4;
    const auto version = take<std::uint32_t>(buf, off);
    if (version != kVersion)
        fail(ErrorCode::format, "HWF1: unsupported version " + std::to_string(version) +
                                    " in " + path);
    const auto n = take<std::uint64_t>(buf, off);
    if (n < 8 || !Grid2D::is_power_of_two(n))
        fail(ErrorCode::format, "HWF1: n must be a power of two >= 8 in " + path);
    const auto box_length = take<double>(buf, off);
    if (!(box_length > 0.0))
        fail(ErrorCode::format, "HWF1: box_length must be positive in " + path);
    const auto tag = take<std::uint8_t>(buf, off);
    if (tag > 1) fail(ErrorCode::format, "HWF1: bad space tag in " + path);

    const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    if (buf.size() - off != 16 * count)
        fail(ErrorCode::format, "HWF1: payload size mismatch in " + path);
    std::vector<complexd> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double re = take<double>(buf, off);
        const double im = take<double>(buf, off);
        values[i] = complexd(re, im);
    }
    return Field(make_grid(n, box_length), static_cast<Space>(tag), std::move(values));
}

}  // namespace hw
