#include "qnr/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qnr/errors.hpp"
#include "qnr/output.hpp"
#include "qnr/proofkit.hpp"

namespace qnr::cli {

using output::Json;

// ---------------------------------------------------------------------------
// Argument parsing

namespace {

u64 parse_plain(std::string_view s, const std::string& flag, const std::string& whole) {
    u64 v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw UsageError(flag + ": expected a non-negative integer, got '" + whole + "'");
    }
    return v;
}

u64 checked_pow(u64 base, u64 exp, const std::string& flag) {
    u64 r = 1;
    for (u64 i = 0; i < exp; ++i) {
        if (base != 0 && r > UINT64_MAX / base) throw UsageError(flag + ": value out of range");
        r *= base;
    }
    return r;
}

}  // namespace

u64 parse_count(const std::string& text, const std::string& flag) {
    const auto caret = text.find('^');
    if (caret != std::string::npos) {
        return checked_pow(parse_plain(std::string_view(text).substr(0, caret), flag, text),
                           parse_plain(std::string_view(text).substr(caret + 1), flag, text), flag);
    }
    const auto e = text.find_first_of("eE");
    if (e != std::string::npos) {
        const u64 mant = parse_plain(std::string_view(text).substr(0, e), flag, text);
        const u64 scale = checked_pow(10, parse_plain(std::string_view(text).substr(e + 1), flag, text), flag);
        if (mant != 0 && scale > UINT64_MAX / mant) throw UsageError(flag + ": value out of range");
        return mant * scale;
    }
    return parse_plain(text, flag, text);
}

schur::ClassFilter parse_class(const std::string& text, const std::string& flag) {
    if (text == "all") return {0, 1};
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw UsageError(flag + ": expected R/M or 'all', got '" + text + "'");
    const u64 r = parse_plain(std::string_view(text).substr(0, slash), flag, text);
    const u64 m = parse_plain(std::string_view(text).substr(slash + 1), flag, text);
    if (m == 0 || r >= m) throw UsageError(flag + ": need 0 <= R < M, got '" + text + "'");
    return {r, m};
}

arith::Rational parse_dyadic(const std::string& text, const std::string& flag) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw UsageError(flag + ": expected N/D, got '" + text + "'");
    const u64 n = parse_plain(std::string_view(text).substr(0, slash), flag, text);
    const u64 d = parse_plain(std::string_view(text).substr(slash + 1), flag, text);
    if (n == 0 || d == 0 || (d & (d - 1)) != 0 || n > (u64{1} << 40) || d > (u64{1} << 40)) {
        throw UsageError(flag + ": need N/D with N >= 1 and D a power of two, got '" + text + "'");
    }
    return {static_cast<i64>(n), static_cast<i64>(d)};
}

// ---------------------------------------------------------------------------
// Commands

namespace {

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Emitter {
    std::ostream& out;
    std::ostream& err;

    void json(const std::string& schema, const Json& args, const Json& records, const Json& extra = {}) {
        Json doc;
        doc["meta"] = output::meta(schema, args);
        if (!extra.is_null()) {
            for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
        }
        doc["records"] = records;
        out << output::render(doc);
    }
};

u64 require_odd_prime(const std::string& text, const std::string& flag) {
    const u64 p = parse_count(text, flag);
    if (p < 3 || !arith::is_prime(p)) throw UsageError(flag + ": " + text + " is not an odd prime");
    return p;
}

u64 require_proof_prime(const std::string& text, const std::string& flag) {
    const u64 p = require_odd_prime(text, flag);
    if (p % 24 != 13) throw UsageError(flag + ": p must be 13 (mod 24)");
    if (p <= proofkit::kProofBound) {
        throw UsageError(flag + ": p=" + text + " is below the supported proof range (p > " +
                         std::to_string(proofkit::kProofBound) + ")");
    }
    if (p >= (u64{1} << 32)) throw UsageError(flag + ": p must be below 2^32");
    return p;
}

int cmd_scan(Emitter& e, const std::string& pText, const std::string& minText) {
    const u64 p = require_odd_prime(pText, "--p");
    const u64 minRun = minText.empty() ? UINT64_MAX : parse_count(minText, "--min-run");
    const auto scan = residue::scan_runs(residue::ResidueTable::build(p), minRun);
    Json args{{"p", p}};
    if (!minText.empty()) args["min_run"] = minRun;
    e.json("run", args, Json::array({output::to_json(scan)}));
    if (scan.report.exceeds && p != 13) {
        e.err << "exceedance at p=" << p << " (run " << scan.report.maxRunLength << ")\n";
        return kClaimFailed;
    }
    return kOk;
}

struct VerifyArgs {
    std::string from, to, cls = "all", format = "csv", out;
    unsigned jobs = 0;
    bool progress = false;
};

int cmd_verify(Emitter& e, const VerifyArgs& a) {
    const u64 lo = parse_count(a.from, "--from");
    const u64 hi = parse_count(a.to, "--to");
    if (lo > hi) throw UsageError("--from: must not exceed --to");
    const schur::ClassFilter filter = parse_class(a.cls, "--class");
    if (a.format != "csv" && a.format != "json") throw UsageError("--format: expected csv or json");

    schur::RangeOptions opts;
    opts.jobs = a.jobs ? a.jobs : default_jobs();
    if (a.progress) {
        opts.progress = [&e](u64 done, u64 total) { e.err << "verify: " << done << "/" << total << " primes\n"; };
    }
    const schur::BatchSummary s = schur::verify_range(lo, hi, filter, opts);

    std::string text;
    if (a.format == "csv") {
        text = output::batch_csv(s);
    } else {
        const Json args{{"from", lo}, {"to", hi}, {"class", a.cls}};
        text = output::render(output::batch_document(s, args));
    }
    if (a.out.empty()) {
        e.out << text;
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw UsageError("--out: cannot open '" + a.out + "' for writing");
        f << text;
        if (!f) throw UsageError("--out: write to '" + a.out + "' failed");
    }

    e.err << "checked " << s.primesChecked << " primes; exceedances:";
    bool claimFailed = false;
    for (const auto& r : s.exceedances) {
        e.err << ' ' << r.p << "(run " << r.maxRunLength << ")";
        if (r.p != 13) claimFailed = true;
        if (r.p % 24 != 13) {
            e.err << "[not 13 mod 24]";
            claimFailed = true;
        }
    }
    if (s.exceedances.empty()) e.err << " none";
    e.err << "; max run^2/p = " << s.maxRatioSqNumerator << "/" << s.maxRatioSqDenominator << " at p="
          << s.maxRatioPrime << "\n";
    return claimFailed ? kClaimFailed : kOk;
}

int cmd_table(Emitter& e) {
    const schur::PaperTableResult t = schur::paper_table();
    Json recs = Json::array();
    std::size_t matched = 0;
    for (const auto& row : t.rows) {
        recs.push_back(output::to_json(row));
        if (row.diffs.empty()) {
            ++matched;
        } else {
            e.err << "mismatch for {" << row.expected.p << "," << row.expected.maxRunLength << ","
                  << row.expected.floorSqrtP << "}: computed {" << row.computed.p << "," << row.computed.maxRunLength
                  << "," << row.computed.floorSqrtP << "}\n";
        }
    }
    e.json("table", Json{{"paper", true}}, recs,
           Json{{"summary", Json{{"matched", matched}, {"total", t.rows.size()}}}});
    e.err << matched << "/" << t.rows.size() << " match\n";
    return t.all_match() ? kOk : kClaimFailed;
}

int cmd_lemma1(Emitter& e, const std::string& pText, const std::string& tText) {
    const u64 p = require_odd_prime(pText, "--p");
    if (p % 24 != 13) throw UsageError("--p: p must be 13 (mod 24)");
    const u64 t = parse_count(tText, "--threshold");
    if (t == 0) throw UsageError("--threshold: must be positive");
    const auto r = proofkit::localization_report(p, t);
    e.json("lemma1", Json{{"p", p}, {"threshold", t}}, Json::array({output::to_json(r)}));
    if (p > proofkit::kProofBound && !r.longRunsLocalized) return kClaimFailed;
    return kOk;
}

int cmd_lemma2(Emitter& e, const std::string& pText, const std::string& kText, const std::string& aText) {
    const u64 p = require_proof_prime(pText, "--p");
    const u64 k = parse_count(kText, "--k");
    if (k < 1 || k > p) throw UsageError("--k: must lie in [1, p]");
    arith::Rational a;
    if (aText.empty()) {
        if (k <= arith::floor_scaled_sqrt(1, 2, p) + 1) {
            throw UsageError("--k: below the localization window; pass --a explicitly");
        }
        a = proofkit::case_select(p, k);
    } else {
        a = parse_dyadic(aText, "--a");
        if (a < arith::Rational(1, 4) || a > arith::Rational(15, 32)) throw UsageError("--a: must lie in [1/4, 15/32]");
    }
    const Json args{{"p", p}, {"k", k}, {"a", a.str()}};
    const auto crit = proofkit::product_criterion(p, k, a);
    Json recs = Json::array({output::to_json(crit)});
    if (!crit.holds()) {
        e.json("criterion", args, recs);
        e.err << "criterion not satisfied; no witness constructed\n";
        return kClaimFailed;
    }
    const auto w = proofkit::product_witness(p, k, a);
    recs.push_back(output::to_json(w));
    e.json("witness", args, recs);
    return kOk;
}

int cmd_sweep(Emitter& e, const std::string& pText, unsigned jobs) {
    const u64 p = require_proof_prime(pText, "--p");
    proofkit::SweepOptions opts;
    opts.jobs = jobs ? jobs : default_jobs();
    const auto s = proofkit::sweep_k(p, opts);
    e.json("sweep", Json{{"p", p}}, Json::array({output::to_json(s)}));
    e.err << "k in [" << s.kFirst << ", " << s.kLast << "]: " << s.refuted << "/" << s.checked << " refuted, "
          << s.failures.size() << " failures\n";
    return s.failures.empty() ? kOk : kClaimFailed;
}

int cmd_thresholds(Emitter& e, const std::string& toText, unsigned jobs) {
    proofkit::ThresholdOptions opts;
    opts.upTo = parse_count(toText, "--to");
    opts.jobs = jobs ? jobs : default_jobs();
    if (opts.upTo <= proofkit::kProofBound) {
        throw UsageError("--to: must exceed " + std::to_string(proofkit::kProofBound));
    }
    const auto reports = proofkit::threshold_report(opts);
    Json recs = Json::array();
    bool ok = true;
    for (const auto& r : reports) {
        recs.push_back(output::to_json(r));
        ok = ok && r.ok();
        e.err << "case " << to_string(r.caseId) << ": " << r.boundaryBehavior << "\n";
    }
    e.json("threshold", Json{{"to", opts.upTo}}, recs);
    return ok ? kOk : kClaimFailed;
}

int cmd_bounds(Emitter& e, const std::string& which, const std::string& fromText, const std::string& toText,
               unsigned jobs) {
    proofkit::Bound b;
    if (which == "brauer5mod8") {
        b = proofkit::Bound::BrauerOdd5mod8;
    } else if (which == "brauer4n1") {
        b = proofkit::Bound::Brauer4n1;
    } else if (which == "norton") {
        b = proofkit::Bound::Norton;
    } else {
        throw UsageError("--which: expected brauer5mod8, brauer4n1 or norton, got '" + which + "'");
    }
    const u64 lo = fromText.empty() ? 3 : parse_count(fromText, "--from");
    const u64 hi = parse_count(toText, "--to");
    if (lo > hi) throw UsageError("--from: must not exceed --to");
    const auto s = proofkit::bound_check(b, lo, hi, jobs ? jobs : default_jobs());
    e.json("bounds", Json{{"which", which}, {"from", lo}, {"to", hi}}, Json::array({output::to_json(s)}));
    e.err << which << ": " << s.primesChecked << " primes, " << s.violations.size() << " violations, "
          << s.indeterminate << " undecided";
    if (!s.probative) e.err << " (empirical only: the bound is asserted without proof)";
    e.err << "\n";
    if (!s.probative) return kOk;
    return s.ok() ? kOk : kClaimFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Longest runs of quadratic non-residues modulo primes", output::kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(output::kToolName) + " " + output::kToolVersion);

    std::string pText, kText, aText, minRun, threshold, fromText, toText, which;
    VerifyArgs va;
    unsigned jobs = 0;
    bool paper = false;

    auto* scan = app.add_subcommand("scan", "Longest non-residue run for one prime");
    scan->add_option("--p", pText, "odd prime")->required();
    scan->add_option("--min-run", minRun, "also list every run at least this long");

    auto* verify = app.add_subcommand("verify", "Compare longest runs with sqrt(p) over a prime range");
    verify->add_option("--from", va.from, "lower end (inclusive)")->required();
    verify->add_option("--to", va.to, "upper end (inclusive)")->required();
    verify->add_option("--class", va.cls, "R/M residue class or 'all'");
    verify->add_option("--jobs", va.jobs, "worker threads (default: hardware threads)");
    verify->add_option("--format", va.format, "csv or json");
    verify->add_option("--out", va.out, "write data here instead of standard output");
    verify->add_flag("--progress", va.progress, "report progress on standard error");

    auto* table = app.add_subcommand("table", "Reproduce the published sample tuples");
    table->add_flag("--paper", paper, "use the twenty published tuples")->required();

    auto* lemma1 = app.add_subcommand("lemma1", "Localization facts and run placement for p = 13 (mod 24)");
    lemma1->add_option("--p", pText, "prime, 13 (mod 24)")->required();
    lemma1->add_option("--threshold", threshold, "list runs at least this long")->required();

    auto* lemma2 = app.add_subcommand("lemma2", "Product criterion and contradiction witness for one k");
    lemma2->add_option("--p", pText, "prime, 13 (mod 24), above 38659")->required();
    lemma2->add_option("--k", kText, "offset of the candidate run start from (p+1)/2")->required();
    lemma2->add_option("--a", aText, "N/D with D a power of two (default: chosen from k)");

    auto* sweep = app.add_subcommand("sweep", "Refute every candidate run start for one prime");
    sweep->add_option("--p", pText, "prime, 13 (mod 24), above 38659")->required();
    sweep->add_option("--jobs", jobs, "worker threads (default: hardware threads)");

    auto* thresholds = app.add_subcommand("thresholds", "Check the case inequalities over every integer p");
    std::string thresholdsTo = "1000000";
    thresholds->add_option("--to", thresholdsTo, "last integer checked (default 10^6)");
    thresholds->add_option("--jobs", jobs, "worker threads (default: hardware threads)");

    auto* bounds = app.add_subcommand("bounds", "Check a cited bound over a prime range");
    bounds->add_option("--which", which, "brauer5mod8, brauer4n1 or norton")->required();
    bounds->add_option("--from", fromText, "lower end (default 3)");
    bounds->add_option("--to", toText, "upper end")->required();
    bounds->add_option("--jobs", jobs, "worker threads (default: hardware threads)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Emitter emit{out, err};
    try {
        if (*scan) return cmd_scan(emit, pText, minRun);
        if (*verify) return cmd_verify(emit, va);
        if (*table) return cmd_table(emit);
        if (*lemma1) return cmd_lemma1(emit, pText, threshold);
        if (*lemma2) return cmd_lemma2(emit, pText, kText, aText);
        if (*sweep) return cmd_sweep(emit, pText, jobs);
        if (*thresholds) return cmd_thresholds(emit, thresholdsTo, jobs);
        if (*bounds) return cmd_bounds(emit, which, fromText, toText, jobs);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << " (required " << e.required() << " bits, available " << e.available() << ")\n";
        return kUsage;
    } catch (const VerificationFailure& e) {
        err << "verification failed: " << e.what() << "\n";
        return kClaimFailed;
    }
    return kUsage;
}

}  // namespace qnr::cli
