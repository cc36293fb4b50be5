#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace takum {

inline constexpr unsigned kMinWidth = 2;
inline constexpr unsigned kMaxWidth = 64;

constexpr std::uint64_t width_mask(unsigned n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// n-bit pattern held in the low bits of payload (MSB first: S, D, R, C, M).
struct TakumBits {
  unsigned width = 0;
  std::uint64_t payload = 0;

  // Validates 2 <= width <= 64 and payload < 2^width.
  static TakumBits make(unsigned width, std::uint64_t payload);
  static TakumBits zero(unsigned width) { return make(width, 0); }
  static TakumBits nar(unsigned width) { return make(width, std::uint64_t{1} << (width - 1)); }

  bool is_zero() const { return payload == 0; }
  bool is_nar() const { return payload == std::uint64_t{1} << (width - 1); }
  unsigned sign_bit() const { return static_cast<unsigned>(payload >> (width - 1)) & 1u; }
  // Payload read as an n-bit two's-complement integer.
  std::int64_t as_signed() const;

  bool operator==(const TakumBits&) const = default;
};

void check_width(unsigned n);

// "<prefix><n>:0x<HEX>", e.g. "takum12:0x400".
std::string to_text(const TakumBits& b, std::string_view prefix = "takum");
// Inverse of to_text with the given prefix; throws Error(ParseError) on bad input.
TakumBits parse_text(std::string_view text, std::string_view prefix = "takum");
// Parses "0x..." / "0b..." / decimal payload text for a given width.
std::uint64_t parse_payload(std::string_view text, unsigned width);
std::string hex_payload(std::uint64_t payload);

}  // namespace takum
