#pragma once

// JSON and CSV serialization for matrices, algebras, channels and reports.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "subalg/entropy.hpp"
#include "subalg/resource.hpp"

namespace subalg {

using Json = nlohmann::ordered_json;

// {"rows", "cols", "data": [[re, im], ...]} row-major.
Json matrix_to_json(const Mat& m);
// Throws ConfigError naming `where` on schema violations.
Mat matrix_from_json(const Json& j, const std::string& where = "matrix");

// Adds {"substate": bool}.
Json state_to_json(const Mat& rho);
Mat state_from_json(const Json& j, const std::string& where = "state");

// {"dim", "blocks": [[m, n], ...], "unitary"}; also accepts
// {"generators": [...], "mode": "algebra" | "commutant"}.
Json subalgebra_to_json(const Subalgebra& N);
Subalgebra subalgebra_from_json(const Json& j, const std::string& where = "algebra");

Json channel_to_json(const QuantumChannel& phi);
QuantumChannel channel_from_json(const Json& j, const std::string& where = "channel");

Json certificate_summary(const SolverCertificate& c);

// Numbers, with +inf written as the string "inf".
Json bits_to_json(double v);

Json report_to_json(const EntropyReport& r);
Json duality_row_to_json(const DualityRow& r);

// Flat tables: header row from the keys of the first row. Nested values are dumped as JSON text.
void write_csv(std::ostream& os, const std::vector<Json>& rows);

Json read_json_file(const std::string& path);

}  // namespace subalg
