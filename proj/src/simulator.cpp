#include "skewls/simulator.hpp"

#include <bit>
#include <random>

#include "skewls/errors.hpp"

namespace skewls {

namespace {

void check_width(int width, int limit, const char* who) {
  if (width < 0) throw ContractError(std::string(who) + ": negative width");
  if (width > limit) {
    throw ResourceError(std::string(who) + ": width " + std::to_string(width) + " exceeds guard " +
                        std::to_string(limit));
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

StateVector StateVector::zeros(int width) { return basis(width, 0); }

StateVector StateVector::basis(int width, std::uint64_t index) {
  check_width(width, kMaxStateWidth, "StateVector");
  const std::uint64_t dim = std::uint64_t{1} << width;
  if (index >= dim) throw ContractError("basis index out of range");
  StateVector s;
  s.width = width;
  s.amplitudes = Vector::Zero(static_cast<Eigen::Index>(dim));
  s.amplitudes[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(const Vector& amps) {
  const auto dim = static_cast<std::uint64_t>(amps.size());
  if (dim == 0 || (dim & (dim - 1)) != 0) throw ContractError("state dimension must be a power of two");
  StateVector s;
  s.width = std::countr_zero(dim);
  check_width(s.width, kMaxStateWidth, "StateVector");
  if (std::abs(amps.norm() - 1) > 1e-8) throw ContractError("state is not normalized");
  s.amplitudes = amps;
  return s;
}

void apply_gate(const Gate& g, Vector& amps) {
  const auto dim = static_cast<std::uint64_t>(amps.size());
  switch (g.kind) {
    case GateKind::CNOT: {
      const std::uint64_t c = std::uint64_t{1} << g.qubits[0], t = std::uint64_t{1} << g.qubits[1];
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & c) && !(i & t)) std::swap(amps[i], amps[i | t]);
      }
      return;
    }
    case GateKind::Toffoli: {
      const std::uint64_t c = (std::uint64_t{1} << g.qubits[0]) | (std::uint64_t{1} << g.qubits[1]);
      const std::uint64_t t = std::uint64_t{1} << g.qubits[2];
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & c) == c && !(i & t)) std::swap(amps[i], amps[i | t]);
      }
      return;
    }
    case GateKind::SWAP: {
      const std::uint64_t a = std::uint64_t{1} << g.qubits[0], b = std::uint64_t{1} << g.qubits[1];
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & a) && !(i & b)) std::swap(amps[i], amps[(i & ~a) | b]);
      }
      return;
    }
    default: {
      const Mat2 m = single_qubit_matrix(g);
      const std::uint64_t bit = std::uint64_t{1} << g.qubits[0];
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const cplx a0 = amps[i], a1 = amps[i | bit];
        amps[i] = m(0, 0) * a0 + m(0, 1) * a1;
        amps[i | bit] = m(1, 0) * a0 + m(1, 1) * a1;
      }
    }
  }
}

StateVector apply(const Circuit& c, const StateVector& s) {
  if (c.width != s.width) throw ContractError("apply: circuit and state widths differ");
  check_width(c.width, kMaxStateWidth, "apply");
  StateVector out = s;
  for (const auto& layer : c.layers) {
    for (const Gate& g : layer) apply_gate(g, out.amplitudes);
  }
  return out;
}

Matrix unitary_of(const Circuit& c) {
  check_width(c.width, kMaxUnitaryWidth, "unitary_of");
  const Eigen::Index dim = Eigen::Index{1} << c.width;
  Matrix u(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    u.col(k) = apply(c, StateVector::basis(c.width, static_cast<std::uint64_t>(k))).amplitudes;
  }
  return u;
}

cplx overlap_amplitude(const Circuit& c) { return apply(c, StateVector::zeros(c.width)).amplitudes[0]; }

double probability_first_qubit_zero(const StateVector& s) {
  double p0 = 0;
  for (Eigen::Index i = 0; i < s.amplitudes.size(); i += 2) p0 += std::norm(s.amplitudes[i]);
  return std::min(1.0, std::max(0.0, p0));
}

ShotResult sample_first_qubit(const StateVector& s, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw ContractError("sample_first_qubit: shots must be at least 1");
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> dist(shots, probability_first_qubit_zero(s));
  ShotResult r;
  r.zeros = dist(rng);
  r.ones = shots - r.zeros;
  r.seed = seed;
  return r;
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : label) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(master) ^ h);
}

}  // namespace skewls
