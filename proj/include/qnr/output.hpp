#pragma once

/**
 * @file output.hpp
 * @brief Serialization of results: CSV for batch records, JSON documents
 *        with a `meta` block and a `records` array for everything.
 *
 * Integers are written as JSON integers (64-bit exact); nothing exact goes
 * through a floating-point value. Key order is fixed per schema.
 */

#include <string>

#include <json.hpp>

#include "qnr/proofkit.hpp"
#include "qnr/schur.hpp"

namespace qnr::output {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "qnrcheck";
inline constexpr const char* kToolVersion = "1.0.0";

inline constexpr const char* kBatchCsvHeader = "p,max_run,run_start,isqrt_p,exceeds";

std::string batch_csv(const schur::BatchSummary& s);

/// {"tool", "version", "schema", "arguments"}
Json meta(const std::string& schema, const Json& arguments);

/// Full document: meta, summary, records.
Json batch_document(const schur::BatchSummary& s, const Json& arguments);

/// Inverse of batch_document. Throws std::runtime_error on malformed input.
schur::BatchSummary parse_batch_document(const std::string& text);

Json to_json(const schur::VerificationRecord& r);
Json to_json(const residue::RunScan& scan);
Json to_json(const schur::TableRow& row);
Json to_json(const proofkit::LocalizationReport& r);
Json to_json(const proofkit::CriterionReport& r);
Json to_json(const proofkit::Witness& w);
Json to_json(const proofkit::SweepSummary& s);
Json to_json(const proofkit::ThresholdReport& r);
Json to_json(const proofkit::BoundSummary& s);

/// Two-space indented dump with a trailing newline.
std::string render(const Json& doc);

}  // namespace qnr::output
