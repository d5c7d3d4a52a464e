#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dqclab {

enum class GateKind : std::uint8_t { H, X, Z, RY, CX, Measure, Reset };

std::string_view to_string(GateKind kind);

enum class ParamSpace : std::uint8_t { Data, Theta };

// Symbolic angle: an index into the flat data-feature (x) or trainable (theta) vector.
struct ParameterRef {
  ParamSpace space = ParamSpace::Data;
  int index = 0;

  friend bool operator==(const ParameterRef&, const ParameterRef&) = default;
};

using Angle = std::variant<double, ParameterRef>;

struct Condition {
  int clbit = 0;
  int value = 1;

  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Gate {
  GateKind kind = GateKind::H;
  // qubits[1] is only meaningful for CX: (control, target).
  std::array<int, 2> qubits{0, -1};
  std::optional<Angle> angle;
  std::optional<int> clbit;
  std::optional<Condition> condition;
  // Marks the CX that distributes a Bell pair between communication qubits of
  // two QPUs. It is an entanglement-distribution event, not a data operation.
  bool bell_pair = false;

  int arity() const { return kind == GateKind::CX ? 2 : 1; }
  int control() const { return qubits[0]; }
  int target() const { return kind == GateKind::CX ? qubits[1] : qubits[0]; }
  bool is_unitary() const {
    return kind != GateKind::Measure && kind != GateKind::Reset && !condition;
  }
  bool is_symbolic() const {
    return angle && std::holds_alternative<ParameterRef>(*angle);
  }

  static Gate h(int q);
  static Gate x(int q, std::optional<Condition> cond = std::nullopt);
  static Gate z(int q, std::optional<Condition> cond = std::nullopt);
  static Gate ry(int q, Angle angle);
  static Gate cx(int control, int target);
  static Gate bell_cx(int control, int target);
  static Gate measure(int q, int clbit);
  static Gate reset(int q);

  friend bool operator==(const Gate&, const Gate&) = default;
};

// Ordered gate list over qubits and classical bits. Append order is execution order.
class Circuit {
 public:
  Circuit(int n_qubits, int n_clbits, int n_data_params = 0, int n_theta_params = 0);

  int n_qubits() const { return n_qubits_; }
  int n_clbits() const { return n_clbits_; }
  int n_data_params() const { return n_data_params_; }
  int n_theta_params() const { return n_theta_params_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }

  // Throws std::invalid_argument / std::out_of_range on a malformed gate.
  void append(const Gate& gate);
  void validate(const Gate& gate) const;

  bool is_bound() const;
  bool has_non_unitary() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  int n_qubits_;
  int n_clbits_;
  int n_data_params_;
  int n_theta_params_;
  std::vector<Gate> gates_;
};

Circuit new_circuit(int n_qubits, int n_clbits);

// Substitutes both parameter spaces; the returned circuit has only literal angles.
Circuit bind(const Circuit& circuit, std::span<const double> x, std::span<const double> theta);

// Drops MEASURE gates that are not followed by any operation on their qubit and
// whose bit is never used as a condition.
Circuit strip_terminal_measurements(const Circuit& circuit);

// Text format: header lines `QUBITS n`, `CLBITS n`, `PARAMS data theta`, then one
// gate per line (`CX 1 2`, `RY 0 0.700000`, `RY 0 x[3]`, `MEASURE 2 -> c0`,
// `X 4 if c0==1`, `RESET 2`, `CX 2 6 bell`). Literal angles use 6 decimals.
std::string dump_text(const Circuit& circuit);
std::string dump_gate(const Gate& gate);
Circuit parse_text(std::string_view text);

}  // namespace dqclab
