#pragma once

#include <string>

#include <json.hpp>

#include "msd/energy.hpp"
#include "msd/functional.hpp"
#include "msd/measure.hpp"

namespace msd {

using nlohmann::json;

/// Throws std::invalid_argument naming the offending key on any schema
/// violation; "schema": 1 is required at the top level of every spec file.
void require_schema(const json& j);

Mat parse_mat(const json& j, const std::string& key);
Vec parse_vec(const json& j, const std::string& key);

EnergyPair parse_energies(const json& j);
Measure1D parse_measure(const json& j);
BVFunction1D parse_bv(const json& j);
MSDPair parse_msd(const json& j);
DirichletSpec parse_dirichlet(const json& j);

json measure_to_json(const Measure1D& mu);

/// Locale-independent float with 12 significant digits.
std::string csv_double(double v);

}  // namespace msd
