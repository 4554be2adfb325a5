#include "lgpkit/instruction.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <string>

#include "lgpkit/errors.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

namespace {

constexpr std::array<std::string_view, 10> kNames = {
    "add", "sub", "mul", "div", "sin", "cos", "sqrt", "ln", "exp", "nop"};

std::string format_operand(const Operand& op) {
  return (op.is_register() ? "R" : "x") + std::to_string(op.index);
}

Operand parse_operand(std::string_view s) {
  s = detail::trim(s);
  if (s.size() < 2 || (s[0] != 'R' && s[0] != 'x')) {
    throw InputError("bad operand '" + std::string(s) + "'");
  }
  const auto index = detail::parse_uint(s.substr(1), "operand index");
  if (index > 0xFFFF) throw InputError("operand index out of range");
  const auto i = static_cast<std::uint16_t>(index);
  return s[0] == 'R' ? Operand::reg(i) : Operand::feature(i);
}

} // namespace

int arity(Func f) noexcept {
  switch (f) {
  case Func::Add:
  case Func::Sub:
  case Func::Mul:
  case Func::Div:
    return 2;
  default:
    return 1;
  }
}

std::string_view function_name(Func f) noexcept {
  return kNames[static_cast<std::size_t>(f)];
}

Func parse_function(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Func>(i);
  }
  throw InputError("unknown function '" + std::string(name) + "'");
}

std::vector<Func> default_functions() {
  return {Func::Add, Func::Sub, Func::Mul, Func::Div,
          Func::Sin, Func::Cos, Func::Sqrt, Func::Log};
}

double apply_function(Func f, double a, double b) noexcept {
  switch (f) {
  case Func::Add: return a + b;
  case Func::Sub: return a - b;
  case Func::Mul: return a * b;
  case Func::Div: return std::fabs(b) < kProtectEpsilon ? a : a / b;
  case Func::Sin: return std::sin(a);
  case Func::Cos: return std::cos(a);
  case Func::Sqrt: return std::sqrt(std::fabs(a));
  case Func::Log: {
    const double m = std::fabs(a);
    return m < kProtectEpsilon ? 0.0 : std::log(m);
  }
  case Func::Exp: return std::exp(a);
  case Func::Nop: return a;
  }
  return a;
}

double sanitize(double v) noexcept {
  if (std::isnan(v)) return 0.0;
  return std::clamp(v, -kValueBound, kValueBound);
}

void RegisterConfig::validate() const {
  if (gamma < 1) throw InputError("gamma must be at least 1");
  if (gamma > 0xFFFF) throw InputError("gamma too large");
  if (num_features < 1) throw InputError("num_features must be at least 1");
  if (output_registers.empty() || output_registers.size() > gamma) {
    throw InputError("output register count must be in [1, gamma]");
  }
  std::vector<std::uint16_t> sorted = output_registers;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InputError("output registers must be distinct");
  }
  if (sorted.back() >= gamma) throw InputError("output register out of range");
}

bool RegisterConfig::valid(const Instruction& ins) const noexcept {
  auto ok = [&](const Operand& op) {
    return op.is_register() ? op.index < gamma : op.index < num_features;
  };
  return ins.dest < gamma && ok(ins.src1) && ok(ins.src2);
}

RegisterConfig RegisterConfig::with_defaults(std::size_t num_features) {
  RegisterConfig c;
  c.num_features = num_features;
  return c;
}

std::string to_string(const Instruction& ins) {
  std::string call = std::string(function_name(ins.func)) + "(" + format_operand(ins.src1) +
                     ", " + format_operand(ins.src2) + ")";
  std::string out = "R" + std::to_string(ins.dest) + " = ";
  if (ins.transform.scale != 1.0) out += detail::format_double(ins.transform.scale) + " * ";
  out += call;
  if (ins.transform.offset != 0.0) out += " + " + detail::format_double(ins.transform.offset);
  return out;
}

Instruction parse_instruction(std::string_view text) {
  const std::string original(text);
  auto fail = [&](const char* why) {
    return InputError("cannot parse instruction '" + original + "': " + why);
  };
  text = detail::trim(text);
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw fail("missing '='");
  const auto lhs = detail::trim(text.substr(0, eq));
  auto rhs = detail::trim(text.substr(eq + 1));
  if (lhs.size() < 2 || lhs[0] != 'R') throw fail("destination must be a register");

  Instruction ins;
  const auto dest = detail::parse_uint(lhs.substr(1), "destination");
  if (dest > 0xFFFF) throw fail("destination out of range");
  ins.dest = static_cast<std::uint16_t>(dest);

  const auto open = rhs.find('(');
  const auto close = rhs.find(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw fail("missing parenthesised arguments");
  }
  auto head = detail::trim(rhs.substr(0, open));
  if (const auto star = head.find('*'); star != std::string_view::npos) {
    ins.transform.scale = detail::parse_double(detail::trim(head.substr(0, star)), "scale");
    head = detail::trim(head.substr(star + 1));
  }
  ins.func = parse_function(head);

  const auto args = rhs.substr(open + 1, close - open - 1);
  const auto comma = args.find(',');
  if (comma == std::string_view::npos) throw fail("expected two operands");
  ins.src1 = parse_operand(args.substr(0, comma));
  ins.src2 = parse_operand(args.substr(comma + 1));

  const auto tail = detail::trim(rhs.substr(close + 1));
  if (!tail.empty()) {
    if (tail[0] != '+') throw fail("unexpected trailing text");
    ins.transform.offset = detail::parse_double(detail::trim(tail.substr(1)), "offset");
  }
  return ins;
}

} // namespace lgpkit
