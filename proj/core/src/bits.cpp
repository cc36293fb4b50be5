#include "takum/bits.hpp"

#include <cctype>
#include <cstdio>

#include "takum/error.hpp"

namespace takum {

void check_width(unsigned n) {
  if (n < kMinWidth || n > kMaxWidth)
    throw Error(ErrorKind::OutOfRange, "width must be in 2..64, got " + std::to_string(n));
}

TakumBits TakumBits::make(unsigned width, std::uint64_t payload) {
  check_width(width);
  if (payload & ~width_mask(width))
    throw Error(ErrorKind::OutOfRange, "payload does not fit in " + std::to_string(width) + " bits");
  return TakumBits{width, payload};
}

std::int64_t TakumBits::as_signed() const {
  if (width == 64) return static_cast<std::int64_t>(payload);
  std::uint64_t sign = std::uint64_t{1} << (width - 1);
  return static_cast<std::int64_t>(payload ^ sign) - static_cast<std::int64_t>(sign);
}

std::string hex_payload(std::uint64_t payload) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llX", static_cast<unsigned long long>(payload));
  return buf;
}

std::string to_text(const TakumBits& b, std::string_view prefix) {
  return std::string(prefix) + std::to_string(b.width) + ":" + hex_payload(b.payload);
}

std::uint64_t parse_payload(std::string_view text, unsigned width) {
  std::string s(text);
  auto bad = [&] { return Error(ErrorKind::ParseError, "bad payload: " + s); };
  int base = 10;
  size_t start = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    start = 2;
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    base = 2;
    start = 2;
  }
  if (start >= s.size()) throw bad();
  std::uint64_t v = 0;
  for (size_t i = start; i < s.size(); ++i) {
    char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(s[i])));
    if (ch == '_' || ch == '\'') continue;
    int d;
    if (ch >= '0' && ch <= '9') {
      d = ch - '0';
    } else if (ch >= 'a' && ch <= 'f') {
      d = ch - 'a' + 10;
    } else {
      throw bad();
    }
    if (d >= base) throw bad();
    if (v > (~std::uint64_t{0} - static_cast<unsigned>(d)) / static_cast<unsigned>(base)) throw bad();
    v = v * static_cast<unsigned>(base) + static_cast<unsigned>(d);
  }
  check_width(width);
  if (v & ~width_mask(width)) throw Error(ErrorKind::ParseError, "payload " + s + " exceeds width");
  return v;
}

TakumBits parse_text(std::string_view text, std::string_view prefix) {
  auto bad = [&] { return Error(ErrorKind::ParseError, "bad takum text: " + std::string(text)); };
  if (text.substr(0, prefix.size()) != prefix) throw bad();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad();
  std::string w(text.substr(prefix.size(), colon - prefix.size()));
  if (w.empty() || w.size() > 2) throw bad();
  for (char ch : w)
    if (!std::isdigit(static_cast<unsigned char>(ch))) throw bad();
  unsigned width = static_cast<unsigned>(std::stoul(w));
  if (width < kMinWidth || width > kMaxWidth) throw bad();
  return TakumBits::make(width, parse_payload(text.substr(colon + 1), width));
}

}  // namespace takum
