#include "spore/checkpoint.hpp"

#include "spore/rng.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>

namespace spore::ckpt {

namespace {
constexpr char kMagic[8] = {'S', 'P', 'O', 'R', 'E', 'C', 'K', 'P'};
}

void write_checkpoint_file(const std::string& path, std::string_view config_hash, std::string_view payload)
{
    ByteWriter w;
    for (char c : kMagic)
        w.put(c);
    w.put(kFormatVersion);
    w.put_string(config_hash);
    w.put_string(payload);
    const std::uint64_t sum = fnv1a64(w.bytes());
    w.put(sum);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CheckpointError(CheckpointError::Kind::Io, "cannot write checkpoint " + tmp);
        out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
        if (!out)
            throw CheckpointError(CheckpointError::Kind::Io, "cannot write checkpoint " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw CheckpointError(CheckpointError::Kind::Io, "cannot move checkpoint into place: " + ec.message());
}

std::string read_checkpoint_file(const std::string& path, std::string_view expected_hash)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CheckpointError(CheckpointError::Kind::Io, "cannot read checkpoint " + path);
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < sizeof kMagic + sizeof(std::uint32_t) + sizeof(std::uint64_t) ||
        bytes.compare(0, sizeof kMagic, std::string_view(kMagic, sizeof kMagic)) != 0)
        throw CheckpointError(CheckpointError::Kind::Format, path + " is not a checkpoint file");

    ByteReader header(std::string_view(bytes).substr(sizeof kMagic));
    const auto version = header.get<std::uint32_t>();
    if (version != kFormatVersion)
        throw CheckpointError(CheckpointError::Kind::Version,
                              "checkpoint format version " + std::to_string(version) + " is not supported (expected " +
                                  std::to_string(kFormatVersion) + ")");

    const std::size_t body = bytes.size() - sizeof(std::uint64_t);
    std::uint64_t stored = 0;
    std::memcpy(&stored, bytes.data() + body, sizeof stored);
    if (fnv1a64(std::string_view(bytes).substr(0, body)) != stored)
        throw CheckpointError(CheckpointError::Kind::Integrity, "checkpoint " + path + " is corrupt (checksum mismatch)");

    ByteReader r(std::string_view(bytes).substr(sizeof kMagic + sizeof(std::uint32_t),
                                                body - sizeof kMagic - sizeof(std::uint32_t)));
    const std::string hash = r.get_string();
    if (hash != expected_hash)
        throw CheckpointError(CheckpointError::Kind::ConfigMismatch,
                              "checkpoint was written for config " + hash + ", current config is " +
                                  std::string(expected_hash));
    std::string payload = r.get_string();
    if (!r.done())
        throw CheckpointError(CheckpointError::Kind::Format, "checkpoint has trailing bytes");
    return payload;
}

}  // namespace spore::ckpt
