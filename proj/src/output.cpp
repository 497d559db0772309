#include "qnr/output.hpp"

#include <sstream>
#include <stdexcept>

namespace qnr::output {

std::string batch_csv(const schur::BatchSummary& s) {
    std::ostringstream os;
    os << kBatchCsvHeader << '\n';
    for (const auto& r : s.records) {
        os << r.p << ',' << r.maxRunLength << ',' << r.runStart << ',' << r.floorSqrtP << ','
           << (r.exceeds ? "true" : "false") << '\n';
    }
    return os.str();
}

Json meta(const std::string& schema, const Json& arguments) {
    Json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["schema"] = schema;
    m["arguments"] = arguments;
    return m;
}

Json to_json(const schur::VerificationRecord& r) {
    Json j;
    j["p"] = r.p;
    j["max_run"] = r.maxRunLength;
    j["run_start"] = r.runStart;
    j["isqrt_p"] = r.floorSqrtP;
    j["exceeds"] = r.exceeds;
    return j;
}

Json batch_document(const schur::BatchSummary& s, const Json& arguments) {
    Json doc;
    doc["meta"] = meta("batch", arguments);
    Json sum;
    sum["from"] = s.lo;
    sum["to"] = s.hi;
    sum["class_residue"] = s.classFilter.residue;
    sum["class_modulus"] = s.classFilter.modulus;
    sum["primes_checked"] = s.primesChecked;
    Json ex = Json::array();
    for (const auto& r : s.exceedances) ex.push_back(r.p);
    sum["exceedances"] = ex;
    sum["max_ratio_sq_numerator"] = s.maxRatioSqNumerator;
    sum["max_ratio_sq_denominator"] = s.maxRatioSqDenominator;
    sum["max_ratio_prime"] = s.maxRatioPrime;
    doc["summary"] = sum;
    Json recs = Json::array();
    for (const auto& r : s.records) recs.push_back(to_json(r));
    doc["records"] = recs;
    return doc;
}

schur::BatchSummary parse_batch_document(const std::string& text) {
    const Json doc = Json::parse(text);
    if (!doc.contains("meta") || doc["meta"].value("schema", "") != "batch") {
        throw std::runtime_error("not a batch document");
    }
    const Json& sum = doc.at("summary");
    schur::BatchSummary s;
    s.lo = sum.at("from").get<u64>();
    s.hi = sum.at("to").get<u64>();
    s.classFilter = {sum.at("class_residue").get<u64>(), sum.at("class_modulus").get<u64>()};
    s.primesChecked = sum.at("primes_checked").get<u64>();
    s.maxRatioSqNumerator = sum.at("max_ratio_sq_numerator").get<u64>();
    s.maxRatioSqDenominator = sum.at("max_ratio_sq_denominator").get<u64>();
    s.maxRatioPrime = sum.at("max_ratio_prime").get<u64>();
    for (const Json& j : doc.at("records")) {
        schur::VerificationRecord r;
        r.p = j.at("p").get<u64>();
        r.maxRunLength = j.at("max_run").get<u64>();
        r.runStart = j.at("run_start").get<u64>();
        r.floorSqrtP = j.at("isqrt_p").get<u64>();
        r.exceeds = j.at("exceeds").get<bool>();
        s.records.push_back(r);
        if (r.exceeds) s.exceedances.push_back(r);
    }
    if (s.records.size() != s.primesChecked) throw std::runtime_error("record count disagrees with summary");
    return s;
}

Json to_json(const residue::RunScan& scan) {
    Json j;
    j["schema"] = "run";
    j["p"] = scan.report.p;
    j["max_run"] = scan.report.maxRunLength;
    j["run_start"] = scan.report.runStart;
    j["isqrt_p"] = scan.report.floorSqrtP;
    j["exceeds"] = scan.report.exceeds;
    Json runs = Json::array();
    for (const auto& r : scan.runs) runs.push_back(Json{{"start", r.start}, {"length", r.length}});
    j["runs"] = runs;
    return j;
}

Json to_json(const schur::TableRow& row) {
    Json j;
    j["schema"] = "table";
    j["p"] = row.expected.p;
    j["expected_max_run"] = row.expected.maxRunLength;
    j["expected_isqrt_p"] = row.expected.floorSqrtP;
    j["max_run"] = row.computed.maxRunLength;
    j["isqrt_p"] = row.computed.floorSqrtP;
    j["run_start"] = row.computed.runStart;
    j["match"] = row.diffs.empty();
    j["diffs"] = row.diffs;
    return j;
}

Json to_json(const proofkit::LocalizationReport& r) {
    auto opt = [](const std::optional<u64>& v) { return v ? Json(*v) : Json(nullptr); };
    Json j;
    j["schema"] = "lemma1";
    j["p"] = r.p;
    j["threshold"] = r.threshold;
    j["gap_a"] = opt(r.gapA);
    j["gap_witness_n"] = opt(r.gapWitnessN);
    j["least_odd_qnr_u"] = r.leastOddQnrU;
    j["upper_half_residue"] = opt(r.upperHalfResidue);
    j["facts_hold"] = r.factsHold;
    j["long_runs_localized"] = r.longRunsLocalized;
    Json runs = Json::array();
    for (const auto& pr : r.runsAtThreshold) {
        runs.push_back(Json{{"start", pr.run.start}, {"length", pr.run.length}, {"placement", to_string(pr.placement)}});
    }
    j["runs"] = runs;
    return j;
}

Json to_json(const proofkit::CriterionReport& r) {
    Json j;
    j["schema"] = "criterion";
    j["p"] = r.p;
    j["k"] = r.k;
    j["a"] = r.a.str();
    j["span_holds"] = r.spanHolds.str();
    j["diff_exceeds_p"] = r.diffExceedsP;
    j["x_low"] = r.xLow;
    j["x_high"] = r.xHigh;
    j["diff_value"] = r.diffValue;
    j["holds"] = r.holds();
    return j;
}

Json to_json(const proofkit::Witness& w) {
    Json j;
    j["schema"] = "witness";
    j["p"] = w.p;
    j["k"] = w.k;
    j["a"] = w.a.str();
    j["x"] = w.x;
    j["c"] = w.c;
    j["y"] = w.y;
    j["m"] = w.m;
    j["n"] = w.n;
    j["residue"] = w.residue;
    j["direct"] = w.direct;
    return j;
}

Json to_json(const proofkit::SweepSummary& s) {
    Json j;
    j["schema"] = "sweep";
    j["p"] = s.p;
    j["k_first"] = s.kFirst;
    j["k_last"] = s.kLast;
    j["checked"] = s.checked;
    j["refuted"] = s.refuted;
    Json f = Json::array();
    for (const auto& x : s.failures) f.push_back(Json{{"k", x.k}, {"a", x.a.str()}, {"reason", x.reason}});
    j["failures"] = f;
    Json b = Json::array();
    for (const auto& x : s.boundary) {
        b.push_back(Json{{"k", x.k}, {"a", x.a.str()}, {"criterion_holds", x.criterionHolds}, {"witness_found", x.witnessFound}});
    }
    j["boundary"] = b;
    return j;
}

Json to_json(const proofkit::ThresholdReport& r) {
    Json j;
    j["schema"] = "threshold";
    j["case"] = to_string(r.caseId);
    j["paper_threshold"] = r.paperThreshold;
    j["verified_from"] = r.verifiedFrom;
    j["checked_up_to"] = r.checkedUpTo;
    j["holds_at_threshold"] = r.holdsAtThreshold;
    j["holds_just_above"] = r.holdsJustAbove;
    j["violations_above"] = r.violationsAbove;
    j["indeterminate"] = r.indeterminate;
    j["boundary_behavior"] = r.boundaryBehavior;
    return j;
}

Json to_json(const proofkit::BoundSummary& s) {
    Json j;
    j["schema"] = "bounds";
    j["which"] = to_string(s.which);
    j["from"] = s.lo;
    j["to"] = s.hi;
    j["primes_checked"] = s.primesChecked;
    j["violation_count"] = s.violations.size();
    Json v = Json::array();
    for (const auto& x : s.violations) v.push_back(Json{{"p", x.p}, {"value", x.value}});
    j["violations"] = v;
    j["indeterminate"] = s.indeterminate;
    j["probative"] = s.probative;
    return j;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace qnr::output
