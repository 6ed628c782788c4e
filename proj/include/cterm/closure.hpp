#pragma once

#include <atomic>
#include <optional>
#include <vector>

#include "cterm/octagon.hpp"
#include "cterm/pdbm.hpp"
#include "cterm/presburger.hpp"

namespace cterm {

// Full: the sequence of tight relation matrices of R^n.
// PreImage: the sequence of their unprimed blocks, i.e. the octagons of exists x'. R^n.
enum class PeriodMode { Full, PreImage };

struct DetectOptions {
  long max_b = 64;
  long max_c = 64;
  PeriodMode mode = PeriodMode::Full;
  const std::atomic<bool>* cancel = nullptr;
};

// Element n of the sequence is base[i] + k * rates[i] for n = b + i + k*c.
struct PeriodCertificate {
  PeriodMode mode = PeriodMode::Full;
  size_t nvars = 0;  // program variables N
  long b = 1;
  long c = 1;
  std::vector<Octagon> prefix;  // elements 1 .. b-1
  std::vector<Octagon> base;    // elements b .. b+c-1
  std::vector<Dbm> rates;       // infinity wherever base is

  // Element n >= 1 of the sequence as predicted by the certificate.
  Octagon predict(long n) const;
};

enum class PeriodStatus { Found, NotFound, NotStarConsistent };

struct PeriodResult {
  PeriodStatus status = PeriodStatus::NotFound;
  PeriodCertificate cert;
  long inconsistent_power = 0;  // least n with R^n empty, for NotStarConsistent
};

struct CancelledError : std::runtime_error {
  CancelledError() : std::runtime_error("cancelled") {}
};

PeriodResult detect_period(const Octagon& r, const DetectOptions& opt = {});

// Checks  seq(n + c) = step(seq(n))  for every n = b+i+kc, k >= 0, on the parametric matrix
// base + k * rate.  Exposed for testing.
bool verify_period_step(const Dbm& base, const Dbm& rate, const Octagon& rc, PeriodMode mode);

// Closed form of exists x'. R^{b+kc}:  u <= a_u + d_u * k  for each octagonal term u.
struct PreClosedForm {
  bool empty = false;  // some power of R is empty
  long b = 1;
  long c = 1;
  Octagon base;  // over N variables
  Dbm rate;      // dual rates on the same entries
  struct Bound {
    OctAtom atom;  // atom.c is a_u
    Int d;
  };
  std::vector<Bound> bounds() const;
};

std::optional<PreClosedForm> pre_closed_form(const Octagon& r, const DetectOptions& opt = {});
// Non-terminating set read off the closed form; bottom when some rate is negative or some power is empty.
std::optional<Octagon> wnt_via_closed_form(const Octagon& r, const DetectOptions& opt = {});

// Union of octagons and of parametric octagonal families over 2N variables (parameter 0 >= 0).
struct ParamOctUnion {
  size_t nvars = 0;
  bool reflexive = false;
  std::vector<Octagon> octs;
  std::vector<ExtParamDbm> families;  // dual matrices of dimension 4N

  Dnf to_dnf() const;
};

// R* (reflexive) or R+; nullopt when no period was found within budget.
std::optional<ParamOctUnion> transitive_closure(const Octagon& r, bool reflexive, const DetectOptions& opt = {});
inline std::optional<ParamOctUnion> reflexive_transitive_closure(const Octagon& r, const DetectOptions& opt = {}) {
  return transitive_closure(r, true, opt);
}

// [pre^1, ..., pre^n] as octagons over N variables.
std::vector<Octagon> kleene_pre_sequence(const Octagon& r, long n);

}  // namespace cterm
