#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stabrad/design.hpp"
#include "stabrad/oracle.hpp"
#include "stabrad/perturbation.hpp"
#include "stabrad/report.hpp"
#include "stabrad/sr_sla.hpp"

namespace stabrad {

struct OracleConfig {
    std::size_t grid_points = kDefaultGridPoints;
    double bisect_tol = kDefaultBisectTol;
};

/// Everything a problem file can carry: the system plus solver overrides.
struct ProblemDocument {
    ProblemSpec spec;
    SLAConfig sla;
    SolverConfig solver;
    OracleConfig oracle;
};

/// Parses and validates a problem document. Throws ParseError for malformed
/// text, missing or unknown fields and non-binary masks, and ValidationError
/// for inconsistent dimensions or an unstable nominal matrix.
ProblemDocument parse_problem_text(std::string_view text, std::string_view source = "<memory>");

ProblemDocument parse_problem(const std::filesystem::path& path);

/// Problem document as JSON text; parse_problem_text inverts it exactly.
std::string serialize_problem(const ProblemDocument& doc);

/// Machine-readable report documents.
std::string sr_reports_json(const ProblemDocument& doc, const std::vector<SRReport>& reports);
std::string design_report_json(const ProblemDocument& doc, const DesignReport& report);

/// One row per SLA iteration.
std::string trace_csv(const SLATrace& trace);

/// Header gamma,alpha_exact,alpha_la,alpha_sla,e_la,e_sla when the rows carry
/// oracle values, gamma,alpha_la,alpha_sla otherwise.
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// %.17g
std::string format_double(double v);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace stabrad
