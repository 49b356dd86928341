#pragma once

#include <istream>
#include <string>

#include <json.hpp>

#include "kronbound/grid.hpp"
#include "kronbound/matrix.hpp"
#include "kronbound/sigma.hpp"

namespace kronbound {

/// {"rows": r, "cols": c, "entries": [["p/q", ...], ...]} with entries as
/// strings "p" or "p/q".
nlohmann::json matrix_to_json(const RationalMatrix& m);
RationalMatrix matrix_from_json(const nlohmann::json& j);

/// One row per line, entries "p/q", comma separated.
std::string matrix_to_csv(const RationalMatrix& m);
RationalMatrix matrix_from_csv(std::istream& in);

/// {"kind": "monomial", "a": 1, "q": 0.6309, "k0": 1, "n": 7}; "q" may be
/// {"log": [3, 2]} meaning log_3(2). Kinds: monomial, logarithmic,
/// clamped-linear, piecewise-closed-form, piecewise-min. "n" (domain hint)
/// is optional everywhere.
SigmaFn sigma_from_json(const nlohmann::json& j);
nlohmann::json sigma_to_json(const SigmaFn& f);

/// {"nA": ..., "nB": ..., "points": [[i, j], ...]}.
nlohmann::json grid_to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);

}  // namespace kronbound
