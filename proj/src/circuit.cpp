#include "nlm/circuit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "nlm/errors.hpp"

namespace nlm {

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

// Tokens of one line, comments stripped, with 1-based column positions.
std::vector<Token> tokenize_line(std::string_view line, int line_number) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    tokens.push_back(Token{std::string(line.substr(start, i - start)), line_number,
                           static_cast<int>(start) + 1});
  }
  return tokens;
}

[[noreturn]] void syntax_error(const Token& token, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << token.line << ", column " << token.column << ": " << what << " ('"
      << token.text << "')";
  throw SyntaxError(msg.str(), token.line, token.column, token.text);
}

[[noreturn]] void semantic_error(const Token& token, const std::string& what) {
  std::ostringstream msg;
  msg << "line " << token.line << ", column " << token.column << ": " << what;
  throw SemanticError(msg.str(), token.line, token.column, token.text);
}

void require_argument_count(const std::vector<Token>& tokens, std::size_t expected) {
  if (tokens.size() != expected + 1) {
    std::ostringstream msg;
    msg << "expected " << expected << " argument" << (expected == 1 ? "" : "s") << " after '"
        << tokens[0].text << "', got " << tokens.size() - 1;
    syntax_error(tokens[0], msg.str());
  }
}

bool parse_real_strict(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) return false;
  }
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto result = std::from_chars(first, last, out);
  return result.ec == std::errc() && result.ptr == last;
}

Register parse_register(const Token& token) {
  Register reg;
  if (!register_from_name(token.text, reg)) {
    semantic_error(token, "unknown register '" + token.text + "'");
  }
  return reg;
}

int parse_value(const Token& token, Register reg) {
  int value;
  if (!value_from_symbol(reg, token.text, value)) {
    semantic_error(token, "'" + token.text + "' is not a basis value of " +
                              std::string(register_name(reg)));
  }
  return value;
}

Complex parse_complex_token(const Token& token) {
  Complex value;
  if (!parse_complex_literal(token.text, value)) {
    syntax_error(token, "malformed complex literal");
  }
  return value;
}

// Shortest decimal representation that parses back to the same double.
std::string shortest_round_trip(double value) {
  char buffer[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, value);
    double parsed = 0.0;
    if (parse_real_strict(buffer, parsed) && parsed == value) {
      return buffer;
    }
  }
  return buffer;
}

}  // namespace

bool parse_complex_literal(std::string_view token, Complex& out) {
  if (token.empty()) return false;
  // Split point of the a+bi / a-bi forms: a sign that is neither leading nor
  // part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = 1; i < token.size(); ++i) {
    const char c = token[i];
    if ((c == '+' || c == '-') && token[i - 1] != 'e' && token[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) {
    if (token.back() == 'i') {
      double imag = 0.0;
      if (!parse_real_strict(token.substr(0, token.size() - 1), imag)) return false;
      out = Complex(0.0, imag);
      return true;
    }
    double real = 0.0;
    if (!parse_real_strict(token, real)) return false;
    out = Complex(real, 0.0);
    return true;
  }
  if (token.back() != 'i') return false;
  double real = 0.0;
  double imag = 0.0;
  if (!parse_real_strict(token.substr(0, split), real)) return false;
  if (!parse_real_strict(token.substr(split, token.size() - split - 1), imag)) return false;
  out = Complex(real, imag);
  return true;
}

std::string format_complex(const Complex& z) {
  const double re = z.real();
  const double im = z.imag();
  if (im == 0.0) {
    return shortest_round_trip(re);
  }
  if (re == 0.0) {
    return shortest_round_trip(im) + "i";
  }
  std::string out = shortest_round_trip(re);
  if (!(im < 0.0) && !std::signbit(im)) {
    out += "+";
  }
  out += shortest_round_trip(im);
  out += "i";
  return out;
}

SystemAmplitudes parse_amplitude_list(std::string_view text) {
  const std::vector<Token> tokens = tokenize_line(text, 1);
  if (tokens.size() != 4) {
    throw SyntaxError("expected 4 complex amplitudes, got " + std::to_string(tokens.size()),
                      1, tokens.empty() ? 1 : tokens.back().column,
                      tokens.empty() ? "" : tokens.back().text);
  }
  return SystemAmplitudes{parse_complex_token(tokens[0]), parse_complex_token(tokens[1]),
                          parse_complex_token(tokens[2]), parse_complex_token(tokens[3])};
}

CircuitProgram parse(std::string_view text) {
  CircuitProgram program;
  bool saw_readout = false;
  Token readout_token{"", 1, 1};

  int line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    ++line_number;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    const std::vector<Token> tokens = tokenize_line(line, line_number);
    if (tokens.empty()) continue;
    const Token& keyword = tokens[0];
    const SourceSpan span{keyword.line, keyword.column};

    if (saw_readout) {
      semantic_error(keyword, "instruction after readout");
    }

    Instruction instr;
    instr.span = span;
    if (keyword.text == "prepare") {
      require_argument_count(tokens, 4);
      if (!program.instructions.empty()) {
        semantic_error(keyword, "duplicate prepare (must be the single first instruction)");
      }
      instr.op = PrepareInstr{SystemAmplitudes{
          parse_complex_token(tokens[1]), parse_complex_token(tokens[2]),
          parse_complex_token(tokens[3]), parse_complex_token(tokens[4])}};
    } else if (keyword.text == "cnot") {
      require_argument_count(tokens, 3);
      const Register control = parse_register(tokens[1]);
      const int value = parse_value(tokens[2], control);
      const Register target = parse_register(tokens[3]);
      if (control == target) {
        semantic_error(tokens[3], "duplicate register: control and target must differ");
      }
      instr.op = CnotInstr{control, value, target};
    } else if (keyword.text == "h") {
      require_argument_count(tokens, 1);
      instr.op = HadamardInstr{parse_register(tokens[1])};
    } else if (keyword.text == "waveplate") {
      require_argument_count(tokens, 3);
      WavePlateKind kind;
      if (tokens[1].text == "HWP" || tokens[1].text == "hwp") {
        kind = WavePlateKind::HWP;
      } else if (tokens[1].text == "QWP" || tokens[1].text == "qwp") {
        kind = WavePlateKind::QWP;
      } else {
        syntax_error(tokens[1], "wave plate kind must be HWP or QWP");
      }
      double angle = 0.0;
      if (!parse_real_strict(tokens[2].text, angle)) {
        syntax_error(tokens[2], "malformed angle");
      }
      const Register reg = parse_register(tokens[3]);
      if (reg != Register::APol && reg != Register::BPol) {
        semantic_error(tokens[3], "wave plates act on a polarization register");
      }
      instr.op = WaveplateInstr{kind, angle, reg};
    } else if (keyword.text == "project") {
      require_argument_count(tokens, 2);
      const Register reg = parse_register(tokens[1]);
      instr.op = ProjectInstr{reg, parse_value(tokens[2], reg)};
    } else if (keyword.text == "readout") {
      require_argument_count(tokens, 1);
      ReadoutKind kind;
      const std::string& name = tokens[1].text;
      if (name == "parity") {
        kind = ReadoutKind::Parity;
      } else if (name == "bell") {
        kind = ReadoutKind::Bell;
      } else if (name == "snapshot") {
        kind = ReadoutKind::Snapshot;
      } else if (name == "state") {
        kind = ReadoutKind::State;
      } else {
        syntax_error(tokens[1], "readout kind must be parity, bell, snapshot or state");
      }
      instr.op = ReadoutInstr{kind};
      saw_readout = true;
      readout_token = keyword;
    } else {
      syntax_error(keyword, "unknown keyword");
    }

    if (program.instructions.empty() && !std::holds_alternative<PrepareInstr>(instr.op)) {
      semantic_error(keyword, "program must start with prepare");
    }
    program.instructions.push_back(std::move(instr));
  }

  if (program.instructions.empty()) {
    throw SemanticError("empty program (missing prepare)", 1, 1, "");
  }
  return program;
}

std::string format_instruction(const Instruction& instr) {
  std::ostringstream out;
  if (const auto* prepare = std::get_if<PrepareInstr>(&instr.op)) {
    out << "prepare " << format_complex(prepare->sys.alpha) << " "
        << format_complex(prepare->sys.beta) << " " << format_complex(prepare->sys.gamma)
        << " " << format_complex(prepare->sys.eta);
  } else if (const auto* cn = std::get_if<CnotInstr>(&instr.op)) {
    out << "cnot " << register_name(cn->control) << " "
        << value_symbol(cn->control, cn->control_value) << " " << register_name(cn->target);
  } else if (const auto* had = std::get_if<HadamardInstr>(&instr.op)) {
    out << "h " << register_name(had->reg);
  } else if (const auto* wp = std::get_if<WaveplateInstr>(&instr.op)) {
    out << "waveplate " << (wp->kind == WavePlateKind::HWP ? "HWP" : "QWP") << " "
        << shortest_round_trip(wp->angle_deg) << " " << register_name(wp->reg);
  } else if (const auto* proj = std::get_if<ProjectInstr>(&instr.op)) {
    out << "project " << register_name(proj->reg) << " "
        << value_symbol(proj->reg, proj->value);
  } else if (const auto* readout = std::get_if<ReadoutInstr>(&instr.op)) {
    const char* names[] = {"parity", "bell", "snapshot", "state"};
    out << "readout " << names[static_cast<int>(readout->kind)];
  }
  return out.str();
}

std::string format(const CircuitProgram& program) {
  std::string out;
  for (const Instruction& instr : program.instructions) {
    out += format_instruction(instr);
    out += "\n";
  }
  return out;
}

ExecutionTrace execute(const CircuitProgram& program) {
  ExecutionTrace trace;
  StateVector state;
  double cumulative = 1.0;

  for (const Instruction& instr : program.instructions) {
    if (const auto* prepare = std::get_if<PrepareInstr>(&instr.op)) {
      state = build_initial_state(prepare->sys);
    } else if (const auto* cn = std::get_if<CnotInstr>(&instr.op)) {
      state = apply(state, cnot(cn->control, cn->control_value, cn->target));
    } else if (const auto* had = std::get_if<HadamardInstr>(&instr.op)) {
      state = apply(state, hadamard(had->reg));
    } else if (const auto* wp = std::get_if<WaveplateInstr>(&instr.op)) {
      state = apply(state, waveplate(wp->kind, wp->angle_deg, wp->reg));
    } else if (const auto* proj = std::get_if<ProjectInstr>(&instr.op)) {
      try {
        Projection selected = project(state, proj->reg, proj->value);
        cumulative *= selected.probability;
        state = std::move(selected.state);
      } catch (const ZeroProbabilityBranchError& e) {
        std::ostringstream msg;
        msg << "line " << instr.span.line << ", column " << instr.span.column << ": "
            << e.what();
        throw ZeroProbabilityBranchError(msg.str());
      }
    } else if (const auto* readout = std::get_if<ReadoutInstr>(&instr.op)) {
      ReadoutPayload payload;
      payload.kind = readout->kind;
      switch (readout->kind) {
        case ReadoutKind::Parity:
          payload.parity = ParityDistribution{state.marginal(Register::BAux, kAuxRight),
                                              state.marginal(Register::BAux, kAuxLeft)};
          break;
        case ReadoutKind::Bell:
          payload.bell =
              bell_distribution_of(branch_of(state, kAuxRight), branch_of(state, kAuxLeft));
          break;
        case ReadoutKind::Snapshot:
          payload.snapshot = snapshot_distribution(state);
          break;
        case ReadoutKind::State:
          payload.state = state;
          break;
      }
      trace.readout = std::move(payload);
    }

    TraceStep step;
    step.text = format_instruction(instr);
    step.span = instr.span;
    step.norm = std::sqrt(state.norm_squared());
    for (Register reg : kAllRegisters) {
      const auto index = static_cast<std::size_t>(reg);
      step.marginals[index][0] = state.marginal(reg, 0);
      step.marginals[index][1] = state.marginal(reg, 1);
    }
    step.cumulative_probability = cumulative;
    trace.steps.push_back(std::move(step));
  }

  trace.cumulative_probability = cumulative;
  return trace;
}

}  // namespace nlm
