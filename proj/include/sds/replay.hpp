#pragma once

#include "sds/verify.hpp"

#include <fstream>
#include <sstream>

namespace sds {

/// One derivation step: optional suppositions, cited clause names (group
/// references like lottery(R45), orbit(R45), eff(R10) expand against the
/// loaded system), and the facts claimed to follow. A step may claim
/// `false` to assert that the citations alone are contradictory.
struct ProofStep {
    std::string name;
    bool expect_pass = true;
    std::vector<std::string> assume_texts;
    std::vector<std::string> uses;
    std::vector<std::string> claim_texts;
    bool claim_false = false;
};

/// Block format, one step per block:
///   step: <name>
///   expect: pass|fail          (optional)
///   assume: atom[, atom]*      (0 or more lines)
///   use: ref [ref ...]         (0 or more lines)
///   claim: atom[, atom]* | false
inline std::vector<ProofStep> parse_proof_steps(std::istream& in) {
    std::vector<ProofStep> steps;
    std::string line;
    int lineno = 0;
    auto need_step = [&]() -> ProofStep& {
        if (steps.empty()) throw std::runtime_error("proof script: content before first step:");
        return steps.back();
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        auto colon = line.find(':', start);
        if (colon == std::string::npos)
            throw std::runtime_error("proof script line " + std::to_string(lineno) +
                                     ": expected 'key: value'");
        std::string key = line.substr(start, colon - start);
        std::string value = line.substr(colon + 1);
        auto vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        while (!value.empty() && isspace(static_cast<unsigned char>(value.back())))
            value.pop_back();
        if (key == "step") {
            ProofStep s;
            s.name = value;
            steps.push_back(std::move(s));
        } else if (key == "expect") {
            if (value != "pass" && value != "fail")
                throw std::runtime_error("proof script: expect must be pass or fail");
            need_step().expect_pass = (value == "pass");
        } else if (key == "assume") {
            std::istringstream parts(value);
            std::string atom;
            while (std::getline(parts, atom, ',')) need_step().assume_texts.push_back(atom);
        } else if (key == "use") {
            std::istringstream parts(value);
            std::string ref;
            while (parts >> ref) need_step().uses.push_back(ref);
        } else if (key == "claim") {
            if (value == "false") {
                need_step().claim_false = true;
            } else {
                std::istringstream parts(value);
                std::string atom;
                while (std::getline(parts, atom, ',')) need_step().claim_texts.push_back(atom);
            }
        } else {
            throw std::runtime_error("proof script: unknown key '" + key + "'");
        }
    }
    for (auto& s : steps)
        if (!s.claim_false && s.claim_texts.empty())
            throw std::runtime_error("proof script: step '" + s.name + "' claims nothing");
    return steps;
}

inline std::vector<ProofStep> parse_proof_steps(const std::string& text) {
    std::istringstream in(text);
    return parse_proof_steps(in);
}

struct StepResult {
    std::string name;
    bool expect_pass = true;
    bool passed = false;
    std::string detail;  // first failing claim, or a summary
};

struct ReplayReport {
    std::vector<StepResult> steps;
    long total_branches = 0;

    /// Full pass: every step behaved as its expectation says.
    bool all_as_expected() const {
        for (auto& s : steps)
            if (s.passed != s.expect_pass) return false;
        return !steps.empty();
    }
};

namespace detail {

inline std::vector<const Clause*> expand_use(const std::string& ref, const ConstraintSystem& sys) {
    std::vector<const Clause*> out;
    auto group = [&](const std::string& prefix) {
        for (auto& cl : sys.clauses)
            if (cl.name.rfind(prefix, 0) == 0) out.push_back(&cl);
    };
    auto paren = ref.find('(');
    if (paren != std::string::npos && ref.back() == ')') {
        std::string kind = ref.substr(0, paren);
        std::string pid = ref.substr(paren + 1, ref.size() - paren - 2);
        if (kind == "lottery") group("lot_" + pid + "_");
        else if (kind == "orbit") group("orb_" + pid + "_");
        else if (kind == "eff") group("eff_" + pid + "_");
        else throw std::out_of_range("unknown condition group '" + ref + "'");
        if (out.empty()) throw std::out_of_range("'" + ref + "' names no clauses");
        return out;
    }
    out.push_back(&sys.clause(ref));
    return out;
}

}  // namespace detail

/// Replays a proof script against a constraint system. The claims of every
/// passed, unconditional (no assume:) pass-expected step join the context
/// available to later steps, mirroring a running derivation. Each claimed
/// atom is verified by refuting its negation with the case-splitting
/// checker over {context} + {assumptions} + {cited clauses}.
inline ReplayReport replay_proof(const std::vector<ProofStep>& steps,
                                 const ConstraintSystem& sys, long budget_per_check = 50000) {
    ReplayReport report;
    std::vector<Atom> context;
    for (auto& step : steps) {
        StepResult result;
        result.name = step.name;
        result.expect_pass = step.expect_pass;

        std::vector<Clause> base;
        int k = 0;
        for (auto& atom : context)
            base.push_back(Clause{"ctx_" + std::to_string(k++), {{atom}}});
        std::vector<Atom> assumed;
        for (auto& text : step.assume_texts) assumed.push_back(parse_atom_text(text, sys.vars));
        k = 0;
        for (auto& atom : assumed)
            base.push_back(Clause{"assume_" + std::to_string(k++), {{atom}}});
        for (auto& ref : step.uses)
            for (const Clause* cl : detail::expand_use(ref, sys)) base.push_back(*cl);

        bool passed = true;
        std::string detail_msg;
        if (step.claim_false) {
            auto out = check_unsat(base, sys.vars.size(), budget_per_check);
            if (std::holds_alternative<UnsatCertificate>(out)) {
                report.total_branches += std::get<UnsatCertificate>(out).branch_count;
            } else {
                passed = false;
                detail_msg = "cited conditions are satisfiable";
            }
        } else {
            for (auto& text : step.claim_texts) {
                Atom claim = parse_atom_text(text, sys.vars);
                bool entailed = true;
                for (auto& negated : negate_atom(claim)) {
                    auto query = base;
                    query.push_back(Clause{"goal", {{negated}}});
                    auto out = check_unsat(query, sys.vars.size(), budget_per_check);
                    if (std::holds_alternative<UnsatCertificate>(out)) {
                        report.total_branches += std::get<UnsatCertificate>(out).branch_count;
                    } else {
                        entailed = false;
                        break;
                    }
                }
                if (!entailed) {
                    passed = false;
                    detail_msg = "claim not entailed: " + text;
                    break;
                }
            }
        }
        result.passed = passed;
        result.detail = detail_msg;
        report.steps.push_back(result);

        if (passed && step.expect_pass && step.assume_texts.empty() && !step.claim_false)
            for (auto& text : step.claim_texts) context.push_back(parse_atom_text(text, sys.vars));
    }
    return report;
}

inline std::vector<ProofStep> load_proof_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_proof_steps(in);
}

}  // namespace sds
