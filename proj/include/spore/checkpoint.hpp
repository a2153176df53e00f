#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace spore::ckpt {

inline constexpr std::uint32_t kFormatVersion = 1;

class CheckpointError : public std::runtime_error {
public:
    enum class Kind { Io, Format, Version, Integrity, ConfigMismatch };
    CheckpointError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Little helper for flat binary payloads of trivially copyable values.
class ByteWriter {
public:
    template <typename T>
    void put(const T& v)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        const auto* p = reinterpret_cast<const char*>(&v);
        bytes_.append(p, sizeof(T));
    }
    template <typename T>
    void put_vector(const std::vector<T>& v)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        put<std::uint64_t>(v.size());
        bytes_.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
    }
    void put_string(std::string_view s)
    {
        put<std::uint64_t>(s.size());
        bytes_.append(s);
    }
    const std::string& bytes() const { return bytes_; }

private:
    std::string bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get()
    {
        static_assert(std::is_trivially_copyable_v<T>);
        need(sizeof(T));
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    template <typename T>
    std::vector<T> get_vector()
    {
        const auto n = get<std::uint64_t>();
        if (n > (bytes_.size() - pos_) / sizeof(T))
            throw CheckpointError(CheckpointError::Kind::Format, "checkpoint payload truncated");
        std::vector<T> v(n);
        std::memcpy(v.data(), bytes_.data() + pos_, n * sizeof(T));
        pos_ += n * sizeof(T);
        return v;
    }
    /// Reads a vector that must have exactly `expected` elements.
    template <typename T>
    std::vector<T> get_vector(std::size_t expected)
    {
        auto v = get_vector<T>();
        if (v.size() != expected)
            throw CheckpointError(CheckpointError::Kind::Format, "checkpoint array has unexpected size");
        return v;
    }
    std::string get_string()
    {
        const auto n = get<std::uint64_t>();
        need(n);
        std::string s(bytes_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const
    {
        if (bytes_.size() - pos_ < n)
            throw CheckpointError(CheckpointError::Kind::Format, "checkpoint payload truncated");
    }
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

/// File layout: magic, format version, config hash, payload, FNV-1a checksum
/// over everything before it.
void write_checkpoint_file(const std::string& path, std::string_view config_hash, std::string_view payload);

/// Returns the payload. Throws CheckpointError on I/O failure, bad magic,
/// version mismatch, checksum mismatch, or a config hash different from
/// `expected_hash`.
std::string read_checkpoint_file(const std::string& path, std::string_view expected_hash);

}  // namespace spore::ckpt
