#ifndef QFC_HASH_HPP
#define QFC_HASH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qfc {

/// SHA-256 of a byte buffer, hex-encoded (lowercase).
std::string sha256_hex(const void* data, std::size_t len);
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

/// Little helper for building hash inputs out of raw bit patterns.
class ByteSink {
public:
    void put_bytes(const void* p, std::size_t n);
    void put_u32(std::uint32_t v);
    void put_u64(std::uint64_t v);
    void put_f64(double v);  // IEEE bit pattern, little endian
    const std::vector<std::uint8_t>& bytes() const { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

}  // namespace qfc

#endif
