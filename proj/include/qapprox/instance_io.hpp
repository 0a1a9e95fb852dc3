#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qapprox/planner.hpp"

namespace qapprox {

/// Insertion-ordered JSON so emitted documents have a stable field layout.
using Json = nlohmann::ordered_json;

/// Caller-side overrides applied on top of the document's `options`.
struct ParseOverrides {
    std::optional<double> tol;   ///< validation tolerance
    std::optional<double> step;  ///< oracle lattice step
};

/// Parses and validates an instance document of the form
///
///   {
///     "target": {"matrix": [[[re,im],[re,im]],[[re,im],[re,im]]]}
///             | {"bloch": [x, y, z]}
///             | {"params": {"a": .., "k": .., "phi": ..}},
///     "set": [{"amplitudes": [[re,im],[re,im]]} | {"bloch": [x,y,z]}, ...],
///     "options": {"tol": .., "step": ..}          // optional
///   }
///
/// Structural problems -- malformed JSON, unknown, missing or mistyped
/// fields, an empty set, out-of-range options -- throw SchemaError carrying
/// the offending field path. Physically invalid states (non-density target
/// matrices, out-of-range parameters, non-unit Bloch vectors, zero
/// amplitudes) throw the corresponding state-validation exceptions.
Instance parse_instance(const std::string& text, const ParseOverrides& overrides = {});
Instance parse_instance(const Json& doc, const ParseOverrides& overrides = {});

/// Result document of a planner run:
/// {distance, fidelity, weights, support, branch, kkt_residual,
///  candidates_evaluated}.
Json result_document(const PlannerReport& report);

/// Comparison document of a verification run: {closed, grid, gap, evaluations}.
Json verify_document(const VerifyReport& report);

/// Seeded random instance: a target drawn uniformly from the (a, k, phi)
/// family and n Haar-uniform pure states (normalized complex Gaussian
/// 2-vectors). The same seed reproduces the byte-identical document.
Json random_instance_document(std::uint64_t seed, int n);

}  // namespace qapprox
