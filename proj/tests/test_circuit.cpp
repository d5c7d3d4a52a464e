#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dqclab/ansatz.hpp"
#include "dqclab/circuit.hpp"

using namespace dqclab;

namespace {

ParameterRef data(int i) { return {ParamSpace::Data, i}; }
ParameterRef weight(int i) { return {ParamSpace::Theta, i}; }

Circuit random_circuit(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> width(2, 9), nbits(1, 4), nparams(1, 5);
  const int n = width(rng), nc = nbits(rng), nd = nparams(rng), nt = nparams(rng);
  Circuit c(n, nc, nd, nt);
  auto pick = [&](int hi) { return std::uniform_int_distribution<int>(0, hi - 1)(rng); };
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  const int len = pick(30);
  for (int i = 0; i < len; ++i) {
    const int q = pick(n);
    switch (pick(9)) {
      case 0: c.append(Gate::h(q)); break;
      case 1: c.append(Gate::x(q, pick(2) ? std::optional<Condition>{} : Condition{pick(nc), pick(2)})); break;
      case 2: c.append(Gate::z(q, pick(2) ? std::optional<Condition>{} : Condition{pick(nc), pick(2)})); break;
      case 3: c.append(Gate::ry(q, std::round(angle(rng) * 1e6) / 1e6)); break;
      case 4: c.append(Gate::ry(q, data(pick(nd)))); break;
      case 5: c.append(Gate::ry(q, weight(pick(nt)))); break;
      case 6: {
        const int t = (q + 1 + pick(n - 1)) % n;
        c.append(pick(4) ? Gate::cx(q, t) : Gate::bell_cx(q, t));
        break;
      }
      case 7: c.append(Gate::measure(q, pick(nc))); break;
      default: c.append(Gate::reset(q)); break;
    }
  }
  return c;
}

}  // namespace

TEST(Circuit, NewCircuitShapes) {
  const Circuit a = new_circuit(8, 2);
  EXPECT_EQ(a.n_qubits(), 8);
  EXPECT_EQ(a.n_clbits(), 2);
  EXPECT_EQ(a.size(), 0u);
  const Circuit b = new_circuit(16, 8);
  EXPECT_EQ(b.n_qubits(), 16);
  EXPECT_EQ(b.n_clbits(), 8);
  const Circuit c = new_circuit(1, 0);
  EXPECT_EQ(c.n_qubits(), 1);
  EXPECT_EQ(c.n_clbits(), 0);
  EXPECT_THROW(new_circuit(0, 0), std::invalid_argument);
}

TEST(Circuit, AppendStoresGates) {
  Circuit c(8, 2, 1, 0);
  c.append(Gate::cx(1, 2));
  EXPECT_EQ(c.size(), 1u);
  c.append(Gate::ry(0, data(0)));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_TRUE(c.gates()[1].is_symbolic());
  EXPECT_EQ(std::get<ParameterRef>(*c.gates()[1].angle), data(0));
  EXPECT_FALSE(c.is_bound());
}

TEST(Circuit, AppendRejectsMalformedGates) {
  Circuit c(8, 2, 1, 1);
  EXPECT_THROW(c.append(Gate::cx(3, 3)), std::invalid_argument);
  EXPECT_THROW(c.append(Gate::cx(0, 8)), std::out_of_range);
  EXPECT_THROW(c.append(Gate::h(-1)), std::out_of_range);
  EXPECT_THROW(c.append(Gate::measure(0, 2)), std::out_of_range);
  EXPECT_THROW(c.append(Gate::ry(0, data(1))), std::out_of_range);
  EXPECT_THROW(c.append(Gate::ry(0, weight(1))), std::out_of_range);
  EXPECT_THROW(c.append(Gate::x(0, Condition{5, 1})), std::out_of_range);
  EXPECT_THROW(c.append(Gate::x(0, Condition{0, 2})), std::invalid_argument);

  Gate angled_h = Gate::h(0);
  angled_h.angle = 0.5;
  EXPECT_THROW(c.append(angled_h), std::invalid_argument);
  Gate conditioned_cx = Gate::cx(0, 1);
  conditioned_cx.condition = Condition{0, 1};
  EXPECT_THROW(c.append(conditioned_cx), std::invalid_argument);
  EXPECT_EQ(c.size(), 0u);
}

TEST(Circuit, BindSubstitutesBothSpaces) {
  Circuit c(1, 0, 1, 0);
  c.append(Gate::ry(0, data(0)));
  const std::vector<double> x{0.7};
  const Circuit b = dqclab::bind(c, x, {});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(std::get<double>(*b.gates()[0].angle), 0.7);
  EXPECT_TRUE(b.is_bound());
}

TEST(Circuit, BindChecksVectorLengths) {
  const Circuit base = build(make_architecture(ArchitectureKind::Baseline));
  const std::vector<double> x(8, 0.1), theta(80, 0.2), short_theta(79, 0.2);
  const Circuit b = dqclab::bind(base, x, theta);
  EXPECT_TRUE(b.is_bound());
  EXPECT_EQ(b.size(), base.size());
  EXPECT_THROW(dqclab::bind(base, x, short_theta), std::invalid_argument);
}

TEST(Circuit, DumpTextLines) {
  Circuit bell(2, 0);
  bell.append(Gate::h(0));
  bell.append(Gate::cx(0, 1));
  EXPECT_EQ(dump_gate(bell.gates()[0]), "H 0");
  EXPECT_EQ(dump_gate(bell.gates()[1]), "CX 0 1");
  EXPECT_NE(dump_text(bell).find("H 0\nCX 0 1\n"), std::string::npos);

  EXPECT_EQ(dump_gate(Gate::z(0, Condition{1, 1})), "Z 0 if c1==1");
  EXPECT_EQ(dump_gate(Gate::ry(0, 0.7)), "RY 0 0.700000");
  EXPECT_EQ(dump_gate(Gate::ry(3, weight(5))), "RY 3 theta[5]");
  EXPECT_EQ(dump_gate(Gate::measure(2, 0)), "MEASURE 2 -> c0");
  EXPECT_EQ(dump_gate(Gate::bell_cx(2, 6)), "CX 2 6 bell");
}

TEST(Circuit, TextRoundTripOnRandomCircuits) {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 100; ++i) {
    const Circuit c = random_circuit(rng);
    const Circuit back = parse_text(dump_text(c));
    EXPECT_EQ(back, c) << dump_text(c);
  }
}

TEST(Circuit, ParseRejectsBadText) {
  EXPECT_THROW(parse_text("CX 0 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("QUBITS 2\nCLBITS 0\nPARAMS 0 0\nFOO 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("QUBITS 2\nCLBITS 0\nPARAMS 0 0\nCX 0 5\n"), std::invalid_argument);
  EXPECT_THROW(parse_text("QUBITS 2\nCLBITS 0\nPARAMS 0 0\nRY 0 abc\n"), std::invalid_argument);
  const Circuit ok = parse_text("# comment\nQUBITS 2\nCLBITS 1\nPARAMS 0 0\nH 0\n\nMEASURE 0 -> c0\n");
  EXPECT_EQ(ok.size(), 2u);
}

TEST(Circuit, StripTerminalMeasurements) {
  Circuit c(3, 2);
  c.append(Gate::h(0));
  c.append(Gate::measure(1, 0));
  c.append(Gate::x(2, Condition{0, 1}));
  c.append(Gate::measure(0, 1));
  const Circuit s = strip_terminal_measurements(c);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.gates()[1].kind, GateKind::Measure);
  EXPECT_FALSE(s.gates().back().kind == GateKind::Measure);
}
