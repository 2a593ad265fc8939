#pragma once

#include <iosfwd>
#include <string>

#include "bsmap/analysis.hpp"

namespace bsmap {

// domain + net as one JSON object (decimal doubles; reload reproduces
// boundary images within eps_point)
std::string domain_to_json(const NetData& net);

// rebuilds a domain from serialized vertices/generators without re-solving
FundamentalDomain domain_from_json(const std::string& text);

std::string report_to_json(const AnalysisReport& rep);

// plot CSV: x_angle, f_angle, branch_index, generator at `samples` uniform
// points plus all branch endpoints, endpoints duplicated on both jump sides
void write_plot_csv(std::ostream& os, const BoundaryMap& map, int samples);

struct ScanRow {
    double alpha;
    bool surjective_predicate;
    bool surjective_empirical;
    bool markov_within_cap;
};

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

}  // namespace bsmap
