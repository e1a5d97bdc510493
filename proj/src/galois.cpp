#include "fountain/galois.hpp"

#include <stdexcept>

namespace fountain {

namespace gf256 {

uint8_t inv(uint8_t a) {
  if (a == 0) throw std::domain_error("gf256: inverse of zero");
  return inv_unchecked(a);
}

uint8_t div(uint8_t a, uint8_t b) { return mul(a, inv(b)); }

}  // namespace gf256

FieldElement::FieldElement(unsigned value, unsigned q)
    : value_(static_cast<uint16_t>(value)), q_(static_cast<uint16_t>(q)) {
  if (q != 2 && q != 256) throw std::invalid_argument("FieldElement: q must be 2 or 256");
  if (value >= q) throw std::invalid_argument("FieldElement: value out of range");
}

static void check_same_field(FieldElement a, FieldElement b) {
  if (a.q() != b.q()) throw std::invalid_argument("field op: mixed field orders");
}

FieldElement field_add(FieldElement a, FieldElement b) {
  check_same_field(a, b);
  return FieldElement(a.value() ^ b.value(), a.q());
}

FieldElement field_mul(FieldElement a, FieldElement b) {
  check_same_field(a, b);
  if (a.q() == 2) return FieldElement(a.value() & b.value(), 2);
  return FieldElement(gf256::mul(static_cast<uint8_t>(a.value()), static_cast<uint8_t>(b.value())), 256);
}

FieldElement field_inv(FieldElement a) {
  if (a.value() == 0) throw std::domain_error("field_inv: zero has no inverse");
  if (a.q() == 2) return a;
  return FieldElement(gf256::inv(static_cast<uint8_t>(a.value())), 256);
}

}  // namespace fountain
