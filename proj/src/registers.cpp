#include "nlm/registers.hpp"

namespace nlm {

namespace {

constexpr std::array<std::string_view, kNumRegisters> kNames = {"APol", "APath", "BPol",
                                                                "BPath", "BAux"};

// Basis letters per register, index 0 then 1.
constexpr std::array<std::array<std::string_view, 2>, kNumRegisters> kSymbols = {{
    {"H", "V"},
    {"d", "u"},
    {"H", "V"},
    {"d", "u"},
    {"0", "1"},
}};

}  // namespace

std::string_view register_name(Register r) { return kNames[static_cast<std::size_t>(r)]; }

bool register_from_name(std::string_view name, Register& out) {
  for (std::size_t i = 0; i < kNumRegisters; ++i) {
    if (kNames[i] == name) {
      out = static_cast<Register>(i);
      return true;
    }
  }
  return false;
}

std::string_view value_symbol(Register r, int value) {
  return kSymbols[static_cast<std::size_t>(r)][value & 1];
}

bool value_from_symbol(Register r, std::string_view symbol, int& out) {
  const auto& symbols = kSymbols[static_cast<std::size_t>(r)];
  if (symbol == symbols[0] || symbol == "0") {
    out = 0;
    return true;
  }
  if (symbol == symbols[1] || symbol == "1") {
    out = 1;
    return true;
  }
  return false;
}

}  // namespace nlm
