#pragma once

#include <array>
#include <cstdint>

namespace fountain {

// GF(256) arithmetic with the primitive polynomial x^8+x^4+x^3+x^2+1 (0x11D).
// Multiplication and inversion go through 256-entry log/antilog tables.
namespace gf256 {

inline constexpr unsigned kPoly = 0x11D;

struct Tables {
  std::array<uint8_t, 256> log{};
  std::array<uint8_t, 510> exp{};  // doubled so mul can skip the mod 255
};

consteval Tables build_tables() {
  Tables t;
  unsigned x = 1;
  for (unsigned i = 0; i < 255; ++i) {
    t.exp[i] = static_cast<uint8_t>(x);
    t.exp[i + 255] = static_cast<uint8_t>(x);
    t.log[x] = static_cast<uint8_t>(i);
    x <<= 1;
    if (x & 0x100) x ^= kPoly;
  }
  return t;
}

inline constexpr Tables kTables = build_tables();

inline constexpr uint8_t add(uint8_t a, uint8_t b) { return a ^ b; }

inline constexpr uint8_t mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[kTables.log[a] + kTables.log[b]];
}

// Multiplicative inverse; a must be nonzero (checked by callers).
inline constexpr uint8_t inv_unchecked(uint8_t a) {
  return kTables.exp[255 - kTables.log[a]];
}

uint8_t inv(uint8_t a);               // throws std::domain_error on 0
uint8_t div(uint8_t a, uint8_t b);    // a * inv(b)

}  // namespace gf256

// A field element tagged with its field order. Only GF(2) and GF(2^8) are
// supported; construction validates both the order and the value range.
class FieldElement {
 public:
  FieldElement(unsigned value, unsigned q);

  unsigned value() const { return value_; }
  unsigned q() const { return q_; }

 private:
  uint16_t value_;
  uint16_t q_;
};

FieldElement field_add(FieldElement a, FieldElement b);
FieldElement field_mul(FieldElement a, FieldElement b);
FieldElement field_inv(FieldElement a);

}  // namespace fountain
