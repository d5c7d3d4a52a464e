#include "dqclab/circuit.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dqclab {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::RY: return "RY";
    case GateKind::CX: return "CX";
    case GateKind::Measure: return "MEASURE";
    case GateKind::Reset: return "RESET";
  }
  return "?";
}

namespace {

Gate make(GateKind kind, int q0, int q1 = -1) {
  Gate g;
  g.kind = kind;
  g.qubits = {q0, q1};
  return g;
}

}  // namespace

Gate Gate::h(int q) { return make(GateKind::H, q); }

Gate Gate::x(int q, std::optional<Condition> cond) {
  Gate g = make(GateKind::X, q);
  g.condition = cond;
  return g;
}

Gate Gate::z(int q, std::optional<Condition> cond) {
  Gate g = make(GateKind::Z, q);
  g.condition = cond;
  return g;
}

Gate Gate::ry(int q, Angle angle) {
  Gate g = make(GateKind::RY, q);
  g.angle = angle;
  return g;
}

Gate Gate::cx(int control, int target) { return make(GateKind::CX, control, target); }

Gate Gate::bell_cx(int control, int target) {
  Gate g = cx(control, target);
  g.bell_pair = true;
  return g;
}

Gate Gate::measure(int q, int clbit) {
  Gate g = make(GateKind::Measure, q);
  g.clbit = clbit;
  return g;
}

Gate Gate::reset(int q) { return make(GateKind::Reset, q); }

Circuit::Circuit(int n_qubits, int n_clbits, int n_data_params, int n_theta_params)
    : n_qubits_(n_qubits),
      n_clbits_(n_clbits),
      n_data_params_(n_data_params),
      n_theta_params_(n_theta_params) {
  if (n_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
  if (n_clbits < 0) throw std::invalid_argument("negative classical bit count");
  if (n_data_params < 0 || n_theta_params < 0)
    throw std::invalid_argument("negative parameter space size");
}

void Circuit::validate(const Gate& gate) const {
  const std::string name(to_string(gate.kind));
  for (int i = 0; i < gate.arity(); ++i) {
    if (gate.qubits[i] < 0 || gate.qubits[i] >= n_qubits_)
      throw std::out_of_range(name + ": qubit index " + std::to_string(gate.qubits[i]) +
                              " outside circuit width " + std::to_string(n_qubits_));
  }
  if (gate.kind == GateKind::CX && gate.qubits[0] == gate.qubits[1])
    throw std::invalid_argument("CX: control and target must differ");
  if (gate.kind != GateKind::CX && gate.bell_pair)
    throw std::invalid_argument(name + ": only CX may be tagged as a Bell-pair preparation");

  if ((gate.kind == GateKind::RY) != gate.angle.has_value())
    throw std::invalid_argument(name + ": angle present iff kind is RY");
  if (gate.angle) {
    if (const auto* ref = std::get_if<ParameterRef>(&*gate.angle)) {
      const int bound = ref->space == ParamSpace::Data ? n_data_params_ : n_theta_params_;
      if (ref->index < 0 || ref->index >= bound)
        throw std::out_of_range("RY: parameter index " + std::to_string(ref->index) +
                                " outside declared space of size " + std::to_string(bound));
    }
  }

  if ((gate.kind == GateKind::Measure) != gate.clbit.has_value())
    throw std::invalid_argument(name + ": clbit present iff kind is MEASURE");
  if (gate.clbit && (*gate.clbit < 0 || *gate.clbit >= n_clbits_))
    throw std::out_of_range("MEASURE: clbit " + std::to_string(*gate.clbit) + " out of range");

  if (gate.condition) {
    if (gate.kind != GateKind::X && gate.kind != GateKind::Z)
      throw std::invalid_argument(name + ": only X and Z may be classically conditioned");
    if (gate.condition->clbit < 0 || gate.condition->clbit >= n_clbits_)
      throw std::out_of_range(name + ": condition bit out of range");
    if (gate.condition->value != 0 && gate.condition->value != 1)
      throw std::invalid_argument(name + ": condition value must be 0 or 1");
  }
}

void Circuit::append(const Gate& gate) {
  validate(gate);
  gates_.push_back(gate);
}

bool Circuit::is_bound() const {
  for (const Gate& g : gates_)
    if (g.is_symbolic()) return false;
  return true;
}

bool Circuit::has_non_unitary() const {
  for (const Gate& g : gates_)
    if (!g.is_unitary()) return true;
  return false;
}

Circuit new_circuit(int n_qubits, int n_clbits) { return Circuit(n_qubits, n_clbits); }

Circuit bind(const Circuit& circuit, std::span<const double> x, std::span<const double> theta) {
  if (static_cast<int>(x.size()) != circuit.n_data_params())
    throw std::invalid_argument("bind: expected " + std::to_string(circuit.n_data_params()) +
                                " data values, got " + std::to_string(x.size()));
  if (static_cast<int>(theta.size()) != circuit.n_theta_params())
    throw std::invalid_argument("bind: expected " + std::to_string(circuit.n_theta_params()) +
                                " theta values, got " + std::to_string(theta.size()));
  Circuit out(circuit.n_qubits(), circuit.n_clbits(), circuit.n_data_params(),
              circuit.n_theta_params());
  for (Gate g : circuit.gates()) {
    if (g.is_symbolic()) {
      const auto ref = std::get<ParameterRef>(*g.angle);
      g.angle = ref.space == ParamSpace::Data ? x[ref.index] : theta[ref.index];
    }
    out.append(g);
  }
  return out;
}

Circuit strip_terminal_measurements(const Circuit& circuit) {
  const auto& gates = circuit.gates();
  std::vector<bool> keep(gates.size(), true);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (gates[i].kind != GateKind::Measure) continue;
    const int q = gates[i].qubits[0];
    const int bit = *gates[i].clbit;
    bool terminal = true;
    for (std::size_t j = i + 1; j < gates.size() && terminal; ++j) {
      const Gate& later = gates[j];
      for (int k = 0; k < later.arity(); ++k)
        if (later.qubits[k] == q) terminal = false;
      if (later.condition && later.condition->clbit == bit) terminal = false;
    }
    keep[i] = !terminal;
  }
  Circuit out(circuit.n_qubits(), circuit.n_clbits(), circuit.n_data_params(),
              circuit.n_theta_params());
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (keep[i]) out.append(gates[i]);
  return out;
}

std::string dump_gate(const Gate& g) {
  std::string line(to_string(g.kind));
  line += ' ';
  line += std::to_string(g.qubits[0]);
  if (g.kind == GateKind::CX) {
    line += ' ';
    line += std::to_string(g.qubits[1]);
    if (g.bell_pair) line += " bell";
  }
  if (g.angle) {
    line += ' ';
    if (const auto* ref = std::get_if<ParameterRef>(&*g.angle)) {
      line += ref->space == ParamSpace::Data ? "x[" : "theta[";
      line += std::to_string(ref->index);
      line += ']';
    } else {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", std::get<double>(*g.angle));
      line += buf;
    }
  }
  if (g.clbit) line += " -> c" + std::to_string(*g.clbit);
  if (g.condition)
    line += " if c" + std::to_string(g.condition->clbit) + "==" +
            std::to_string(g.condition->value);
  return line;
}

std::string dump_text(const Circuit& circuit) {
  std::string out;
  out += "QUBITS " + std::to_string(circuit.n_qubits()) + '\n';
  out += "CLBITS " + std::to_string(circuit.n_clbits()) + '\n';
  out += "PARAMS " + std::to_string(circuit.n_data_params()) + ' ' +
         std::to_string(circuit.n_theta_params()) + '\n';
  for (const Gate& g : circuit.gates()) {
    out += dump_gate(g);
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void parse_error(int line_no, const std::string& what) {
  throw std::invalid_argument("circuit text line " + std::to_string(line_no) + ": " + what);
}

int parse_int(std::string_view token, int line_no) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    parse_error(line_no, "expected integer, got '" + std::string(token) + "'");
  return value;
}

int parse_clbit_ref(std::string_view token, int line_no) {
  if (token.size() < 2 || token[0] != 'c')
    parse_error(line_no, "expected classical bit 'cN', got '" + std::string(token) + "'");
  return parse_int(token.substr(1), line_no);
}

Angle parse_angle(std::string_view token, int line_no) {
  auto symbolic = [&](std::string_view prefix, ParamSpace space) -> std::optional<Angle> {
    if (!token.starts_with(prefix) || !token.ends_with("]")) return std::nullopt;
    const auto inner = token.substr(prefix.size(), token.size() - prefix.size() - 1);
    return ParameterRef{space, parse_int(inner, line_no)};
  };
  if (auto a = symbolic("x[", ParamSpace::Data)) return *a;
  if (auto a = symbolic("theta[", ParamSpace::Theta)) return *a;
  const std::string text(token);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) parse_error(line_no, "bad angle '" + text + "'");
  return value;
}

GateKind parse_kind(std::string_view token, int line_no) {
  for (GateKind k : {GateKind::H, GateKind::X, GateKind::Z, GateKind::RY, GateKind::CX,
                     GateKind::Measure, GateKind::Reset})
    if (to_string(k) == token) return k;
  parse_error(line_no, "unknown gate '" + std::string(token) + "'");
}

}  // namespace

Circuit parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  int n_qubits = -1, n_clbits = 0, n_data = 0, n_theta = 0;
  std::optional<Circuit> circuit;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tok;
    std::istringstream words(line);
    for (std::string w; words >> w;) tok.push_back(w);
    if (tok.empty() || tok[0].starts_with('#')) continue;

    if (!circuit) {
      if (tok[0] == "QUBITS" && tok.size() == 2) {
        n_qubits = parse_int(tok[1], line_no);
        continue;
      }
      if (tok[0] == "CLBITS" && tok.size() == 2) {
        n_clbits = parse_int(tok[1], line_no);
        continue;
      }
      if (tok[0] == "PARAMS" && tok.size() == 3) {
        n_data = parse_int(tok[1], line_no);
        n_theta = parse_int(tok[2], line_no);
        continue;
      }
      if (n_qubits < 0) parse_error(line_no, "missing QUBITS header");
      circuit.emplace(n_qubits, n_clbits, n_data, n_theta);
    }

    Gate g;
    g.kind = parse_kind(tok[0], line_no);
    std::size_t pos = 1;
    auto next = [&]() -> std::string_view {
      if (pos >= tok.size()) parse_error(line_no, "truncated gate");
      return tok[pos++];
    };
    g.qubits[0] = parse_int(next(), line_no);
    if (g.kind == GateKind::CX) {
      g.qubits[1] = parse_int(next(), line_no);
      if (pos < tok.size() && tok[pos] == "bell") {
        g.bell_pair = true;
        ++pos;
      }
    }
    if (g.kind == GateKind::RY) g.angle = parse_angle(next(), line_no);
    if (g.kind == GateKind::Measure) {
      if (next() != "->") parse_error(line_no, "expected '->' after MEASURE qubit");
      g.clbit = parse_clbit_ref(next(), line_no);
    }
    if (pos < tok.size() && tok[pos] == "if") {
      ++pos;
      const std::string_view cond = next();
      const auto eq = cond.find("==");
      if (eq == std::string_view::npos) parse_error(line_no, "condition must be cN==v");
      g.condition = Condition{parse_clbit_ref(cond.substr(0, eq), line_no),
                              parse_int(cond.substr(eq + 2), line_no)};
    }
    if (pos != tok.size()) parse_error(line_no, "trailing tokens");
    try {
      circuit->append(g);
    } catch (const std::exception& e) {
      parse_error(line_no, e.what());
    }
  }
  if (!circuit) {
    if (n_qubits < 0) throw std::invalid_argument("circuit text: missing QUBITS header");
    circuit.emplace(n_qubits, n_clbits, n_data, n_theta);
  }
  return *circuit;
}

}  // namespace dqclab
