#pragma once
// CSV and JSON renderings of check results. Numbers are printed with a
// fixed format so identical runs give identical bytes.

#include <ostream>
#include <string>
#include <vector>

#include "mehler/inequalities.hpp"
#include "mehler/levy_core.hpp"

namespace mehler {

std::string format_number(double x);  // %.10g, "inf"/"-inf"/"nan" spelled out
std::string csv_field(const std::string& s);

// the relation a row tests, written out; matched on the check name prefix
std::string statement_of(const std::string& check);

void write_verify_csv(std::ostream& out, const std::vector<VerificationResult>& rows);
void write_verify_json(std::ostream& out, const std::vector<VerificationResult>& rows);

struct HypothesisRow {
    std::string model;
    std::string clause;
    std::string verdict;
    double value;
    std::string note;
};
void write_hypotheses_csv(std::ostream& out, const std::vector<HypothesisRow>& rows);

}  // namespace mehler
