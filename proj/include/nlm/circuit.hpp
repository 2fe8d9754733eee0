#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlm/protocol.hpp"

namespace nlm {

struct SourceSpan {
  int line = 1;
  int column = 1;
};

struct PrepareInstr {
  SystemAmplitudes sys;
};
struct CnotInstr {
  Register control;
  int control_value;
  Register target;
};
struct HadamardInstr {
  Register reg;
};
struct WaveplateInstr {
  WavePlateKind kind;
  double angle_deg;
  Register reg;
};
struct ProjectInstr {
  Register reg;
  int value;
};

enum class ReadoutKind { Parity, Bell, Snapshot, State };

struct ReadoutInstr {
  ReadoutKind kind;
};

struct Instruction {
  std::variant<PrepareInstr, CnotInstr, HadamardInstr, WaveplateInstr, ProjectInstr,
               ReadoutInstr>
      op;
  SourceSpan span;
};

/// A validated program: exactly one prepare (first), at most one readout
/// (last), every register one of the five.
struct CircuitProgram {
  std::vector<Instruction> instructions;
};

/// One instruction per line; `#` starts a comment; tokens are whitespace
/// separated. Complex literals are `a`, `bi`, `a+bi` or `a-bi` with decimal
/// reals. Throws SyntaxError / SemanticError with 1-based line and column.
CircuitProgram parse(std::string_view text);

/// Canonical pretty-print; parse(format(p)) is structurally identical to p.
/// Comments are not part of a program and do not survive.
std::string format(const CircuitProgram& program);
std::string format_instruction(const Instruction& instr);

struct TraceStep {
  std::string text;  // canonical instruction text
  SourceSpan span;
  double norm = 0.0;
  /// marginals[register][value]
  std::array<std::array<double, 2>, kNumRegisters> marginals{};
  double cumulative_probability = 1.0;  // product of post-selection masses so far
};

struct ReadoutPayload {
  ReadoutKind kind = ReadoutKind::State;
  ParityDistribution parity{};
  BellDistribution bell{};
  SnapshotDistribution snapshot{};
  StateVector state;
};

struct ExecutionTrace {
  std::vector<TraceStep> steps;
  std::optional<ReadoutPayload> readout;
  double cumulative_probability = 1.0;
};

/// Runs the program against the state kernel. A zero-probability projection
/// surfaces as ZeroProbabilityBranchError whose message carries the
/// instruction's line.
ExecutionTrace execute(const CircuitProgram& program);

/// Shared complex-literal grammar (`a`, `bi`, `a+bi`, `a-bi`).
bool parse_complex_literal(std::string_view token, Complex& out);
std::string format_complex(const Complex& z);

/// Parses four whitespace-separated complex literals, e.g. "0.5 -0.5i 0.5 -0.5i".
/// Throws SyntaxError on malformed input (line/column refer to the string).
SystemAmplitudes parse_amplitude_list(std::string_view text);

}  // namespace nlm
