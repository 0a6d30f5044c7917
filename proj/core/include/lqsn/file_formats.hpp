#pragma once

#include <string>
#include <variant>

#include "lqsn/moment_sim.hpp"
#include "lqsn/optics.hpp"

namespace lqsn {

/// A parsed system description: either an (S, K, R) triple or a realizable
/// (A, B, C, D) quadruple.
using ParsedSystem = std::variant<OscillatorParams, StateSpace>;

/// Parses and fully validates a system spec document (SKR invariants checked
/// against tol; ABCD inputs are realizability-checked on load).
/// Throws ParseError for malformed documents, ValidationError /
/// NotRealizableError for invariant violations.
ParsedSystem parse_system_spec(const std::string& text, double tol = kDefaultTol);

/// Structure-only parse (dimensions and finiteness, no invariant checks);
/// used by `validate`, which reports violations instead of throwing.
ParsedSystem parse_system_spec_document(const std::string& text);

std::string emit_system_spec(const OscillatorParams& g);
std::string emit_system_spec(const StateSpace& ss);

std::string emit_netlist(const OpticalNetlist& nl);
OpticalNetlist parse_netlist(const std::string& text);

std::string emit_plan(const SynthesisPlan& plan);
SynthesisPlan parse_plan(const std::string& text);

std::string emit_trajectory(const MomentTrajectory& traj);

/// Converts any parsed system to the oscillator form (identity on SKR).
OscillatorParams to_oscillator(const ParsedSystem& system, double tol = kDefaultTol);

}  // namespace lqsn
