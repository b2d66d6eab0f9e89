#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsem {

/// Little-endian field writer over a std::ostream.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& os) : os_(os) {}

    void bytes(const void* data, std::size_t n) { os_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n)); }
    void tag(std::string_view four) { bytes(four.data(), 4); }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u32(std::uint32_t v) {
        const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
        bytes(b, 4);
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void u64(std::uint64_t v) {
        u32(static_cast<std::uint32_t>(v));
        u32(static_cast<std::uint32_t>(v >> 32));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

private:
    std::ostream& os_;
};

/// Little-endian field reader; every short read throws with the source name.
class BinaryReader {
public:
    BinaryReader(std::istream& is, std::string source) : is_(is), source_(std::move(source)) {}

    void bytes(void* data, std::size_t n) {
        is_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(is_.gcount()) != n) {
            throw std::runtime_error(source_ + ": truncated or unreadable file");
        }
    }
    std::string tag() {
        char b[4];
        bytes(b, 4);
        return std::string(b, 4);
    }
    std::uint8_t u8() {
        std::uint8_t v;
        bytes(&v, 1);
        return v;
    }
    std::uint32_t u32() {
        unsigned char b[4];
        bytes(b, 4);
        return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
               static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    std::uint64_t u64() {
        const std::uint64_t lo = u32();
        return lo | static_cast<std::uint64_t>(u32()) << 32;
    }
    double f64() { return std::bit_cast<double>(u64()); }

    const std::string& source() const { return source_; }
    [[noreturn]] void fail(const std::string& what) const { throw std::runtime_error(source_ + ": " + what); }

private:
    std::istream& is_;
    std::string source_;
};

}  // namespace fsem
