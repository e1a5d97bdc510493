#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fountain/matrix.hpp"

namespace fountain {

// On-the-wire identifier of the degree distribution a stream was encoded
// with. Parametric distributions carry their parameters out of band.
enum class DistId : uint8_t {
  Soliton = 0,
  RobustSoliton = 1,
  RaptorReference = 2,
  Table4096 = 3,
  Table8192 = 4,
  File = 5,
};

// Fixed 28-byte header preceding each symbol payload:
//   magic "LTPK" | version u8 | flags u8 | k u32 | symbol_size u32 |
//   dist_id u8 | reserved u8 | base_seed u64 | esi u32
// Multi-byte fields are little-endian. Flag bit 0 marks a systematic stream.
struct PacketHeader {
  uint8_t version = 1;
  bool systematic = false;
  uint32_t k = 0;
  uint32_t symbol_size = 0;
  DistId dist_id = DistId::Soliton;
  uint64_t base_seed = 0;
  uint32_t esi = 0;
};

inline constexpr size_t kPacketHeaderSize = 28;

std::vector<uint8_t> pack_packet(const PacketHeader& h, const Payload& payload);
PacketHeader parse_packet(const uint8_t* data, size_t len, Payload& payload);

void write_packet(std::ostream& out, const PacketHeader& h, const Payload& payload);
// nullopt cleanly at EOF; throws on a truncated or malformed packet.
std::optional<std::pair<PacketHeader, Payload>> read_packet(std::istream& in);

}  // namespace fountain
