#include "fountain/packet.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace fountain {
namespace {

constexpr char kMagic[4] = {'L', 'T', 'P', 'K'};

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

}  // namespace

std::vector<uint8_t> pack_packet(const PacketHeader& h, const Payload& payload) {
  if (payload.size() != h.symbol_size)
    throw std::invalid_argument("pack_packet: payload does not match symbol_size");
  std::vector<uint8_t> out;
  out.reserve(kPacketHeaderSize + payload.size());
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(h.version);
  out.push_back(h.systematic ? 0x01 : 0x00);
  put_u32(out, h.k);
  put_u32(out, h.symbol_size);
  out.push_back(static_cast<uint8_t>(h.dist_id));
  out.push_back(0x00);
  put_u64(out, h.base_seed);
  put_u32(out, h.esi);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

PacketHeader parse_packet(const uint8_t* data, size_t len, Payload& payload) {
  if (len < kPacketHeaderSize) throw std::runtime_error("packet: truncated header");
  if (std::memcmp(data, kMagic, 4) != 0) throw std::runtime_error("packet: bad magic");
  PacketHeader h;
  h.version = data[4];
  if (h.version != 1)
    throw std::runtime_error("packet: unsupported version " + std::to_string(h.version));
  const uint8_t flags = data[5];
  if (flags & ~uint8_t{0x01}) throw std::runtime_error("packet: unknown flag bits");
  h.systematic = flags & 0x01;
  h.k = get_u32(data + 6);
  h.symbol_size = get_u32(data + 10);
  if (data[14] > static_cast<uint8_t>(DistId::File))
    throw std::runtime_error("packet: unknown distribution id");
  h.dist_id = static_cast<DistId>(data[14]);
  h.base_seed = get_u64(data + 16);
  h.esi = get_u32(data + 24);
  if (len != kPacketHeaderSize + size_t{h.symbol_size})
    throw std::runtime_error("packet: length does not match symbol_size");
  payload.assign(data + kPacketHeaderSize, data + len);
  return h;
}

void write_packet(std::ostream& out, const PacketHeader& h, const Payload& payload) {
  const auto bytes = pack_packet(h, payload);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("packet: write failed");
}

std::optional<std::pair<PacketHeader, Payload>> read_packet(std::istream& in) {
  uint8_t head[kPacketHeaderSize];
  in.read(reinterpret_cast<char*>(head), kPacketHeaderSize);
  if (in.gcount() == 0 && in.eof()) return std::nullopt;
  if (in.gcount() != static_cast<std::streamsize>(kPacketHeaderSize))
    throw std::runtime_error("packet: truncated header");
  const uint32_t symbol_size = get_u32(head + 10);
  std::vector<uint8_t> buf(kPacketHeaderSize + symbol_size);
  std::memcpy(buf.data(), head, kPacketHeaderSize);
  in.read(reinterpret_cast<char*>(buf.data() + kPacketHeaderSize), symbol_size);
  if (in.gcount() != static_cast<std::streamsize>(symbol_size))
    throw std::runtime_error("packet: truncated payload");
  Payload payload;
  PacketHeader h = parse_packet(buf.data(), buf.size(), payload);
  return std::make_pair(h, std::move(payload));
}

}  // namespace fountain
