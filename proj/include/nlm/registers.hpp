#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace nlm {

// The five binary registers of the two-photon system, in canonical order.
// Encoding is fixed: APol/BPol H->0 V->1, APath/BPath d->0 u->1,
// BAux left(b0)->0 right(b1)->1.
enum class Register : unsigned { APol = 0, APath = 1, BPol = 2, BPath = 3, BAux = 4 };

inline constexpr std::size_t kNumRegisters = 5;
inline constexpr std::size_t kDim = 32;

inline constexpr std::array<Register, kNumRegisters> kAllRegisters = {
    Register::APol, Register::APath, Register::BPol, Register::BPath, Register::BAux};

// APol occupies the most significant bit of a basis index, BAux the least:
// index = APol*16 + APath*8 + BPol*4 + BPath*2 + BAux.
constexpr unsigned bit_position(Register r) { return 4u - static_cast<unsigned>(r); }

constexpr std::size_t basis_index(int apol, int apath, int bpol, int bpath, int baux) {
  return (static_cast<std::size_t>(apol) << 4) | (static_cast<std::size_t>(apath) << 3) |
         (static_cast<std::size_t>(bpol) << 2) | (static_cast<std::size_t>(bpath) << 1) |
         static_cast<std::size_t>(baux);
}

constexpr int bit_of(std::size_t index, Register r) {
  return static_cast<int>((index >> bit_position(r)) & 1u);
}

// Register values in the fixed encoding.
inline constexpr int kPolH = 0;
inline constexpr int kPolV = 1;
inline constexpr int kPathDown = 0;
inline constexpr int kPathUp = 1;
inline constexpr int kAuxLeft = 0;   // b0
inline constexpr int kAuxRight = 1;  // b1

std::string_view register_name(Register r);
bool register_from_name(std::string_view name, Register& out);

// Symbolic basis letters per register: "H"/"V", "d"/"u", "0"/"1".
std::string_view value_symbol(Register r, int value);
// Accepts the register's letters or a literal 0/1.
bool value_from_symbol(Register r, std::string_view symbol, int& out);

}  // namespace nlm
