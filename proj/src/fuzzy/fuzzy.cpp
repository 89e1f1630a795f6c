#include "exogait/fuzzy/fuzzy.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace exogait::fuzzy {

namespace {

constexpr std::array<const char*, 9> kPhaseNames = {
    "heel_strike",   "loading_response", "mid_stance",
    "terminal_stance", "pre_swing",      "initial_swing",
    "mid_swing",     "terminal_swing",   "unknown",
};

constexpr Literal H = Literal::High;
constexpr Literal L = Literal::Low;

}  // namespace

const char* phase_name(GaitPhase p) { return kPhaseNames[static_cast<int>(p)]; }

GaitPhase phase_from_name(std::string_view name) {
    for (int i = 0; i < 9; ++i) {
        if (name == kPhaseNames[i]) return static_cast<GaitPhase>(i);
    }
    throw fuzzy_error(FuzzyErrorKind::BadRuleTable,
                      "unknown gait phase '" + std::string(name) + "'");
}

RuleTable default_rule_table() {
    // Literal order: LH, L5M, L1M, RH, R5M, R1M.
    return RuleTable{
        {{
            {GaitPhase::HeelStrike, {L, H, H, H, L, H}},
            {GaitPhase::LoadingResponse, {L, L, H, H, H, L}},
            {GaitPhase::MidStance, {L, L, L, H, H, H}},
            {GaitPhase::TerminalStance, {H, L, L, L, H, H}},
            {GaitPhase::PreSwing, {H, L, L, L, L, H}},
            {GaitPhase::InitialSwing, {H, H, H, L, H, L}},
            {GaitPhase::MidSwing, {H, H, H, L, L, L}},
            {GaitPhase::TerminalSwing, {L, H, H, L, L, L}},
        }},
        Side::Right,
    };
}

RuleTable eq5_variant_rule_table() {
    RuleTable t = default_rule_table();
    t.rules[0].literals[R1M] = L;
    return t;
}

RuleTable mirror_rules(const RuleTable& table) {
    RuleTable out = table;
    out.side = table.side == Side::Right ? Side::Left : Side::Right;
    for (int r = 0; r < kNumPhases; ++r) {
        for (int c = 0; c < 3; ++c) {
            std::swap(out.rules[r].literals[c], out.rules[r].literals[c + 3]);
        }
    }
    return out;
}

void validate_rule_table(const RuleTable& table) {
    std::set<GaitPhase> phases;
    std::set<std::array<Literal, kNumChannels>> patterns;
    for (const Rule& r : table.rules) {
        if (r.phase == GaitPhase::Unknown) {
            throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "rules may not target 'unknown'");
        }
        phases.insert(r.phase);
        patterns.insert(r.literals);
    }
    if (phases.size() != kNumPhases) {
        throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "need exactly one rule per phase");
    }
    if (patterns.size() != kNumPhases) {
        throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "rule literal patterns must be distinct");
    }
}

NormalizedFsr normalize(const std::array<double, kNumChannels>& fsr_raw,
                        double contact_epsilon) {
    double sum = 0.0;
    for (double v : fsr_raw) {
        if (v < 0.0) {
            throw fuzzy_error(FuzzyErrorKind::NegativeReading, "FSR counts must be non-negative");
        }
        sum += v;
    }
    NormalizedFsr out;
    if (sum < contact_epsilon) {
        out.no_contact = true;
        return out;
    }
    for (int i = 0; i < kNumChannels; ++i) out.values[i] = fsr_raw[i] / sum;
    return out;
}

double membership(double f_star, const MembershipParams& params) {
    return 1.0 / (1.0 + std::exp(-params.s * (f_star - params.f0)));
}

LinguisticGrades grades(const NormalizedFsr& n, const MembershipParams& params) {
    if (n.no_contact) {
        throw fuzzy_error(FuzzyErrorKind::NoContact, "no grades for an airborne sample");
    }
    LinguisticGrades g;
    for (int i = 0; i < kNumChannels; ++i) {
        g.high[i] = membership(n.values[i] * params.scale, params);
        g.low[i] = 1.0 - g.high[i];
    }
    return g;
}

std::array<double, kNumPhases> evaluate_rules(const LinguisticGrades& g,
                                              const RuleTable& table) {
    std::array<double, kNumPhases> out{};
    for (const Rule& r : table.rules) {
        double grade = 1.0;
        for (int c = 0; c < kNumChannels; ++c) {
            const double lit = r.literals[c] == Literal::High ? g.high[c] : g.low[c];
            grade = std::min(grade, lit);
        }
        out[static_cast<int>(r.phase)] = grade;
    }
    return out;
}

std::pair<PhaseEstimate, SmoothingState> classify(
    const std::array<double, kNumChannels>& fsr_raw, SmoothingState state,
    const ClassifierConfig& config, std::int64_t frame_index) {
    PhaseEstimate est;
    est.frame_index = frame_index;

    const NormalizedFsr n = normalize(fsr_raw, config.contact_epsilon);
    if (n.no_contact) {
        // Keep the committed phase but break any pending candidate run.
        state.candidate = GaitPhase::Unknown;
        state.run = 0;
        est.selected = GaitPhase::Unknown;
        return {est, state};
    }

    est.grades = evaluate_rules(grades(n, config.membership), config.table);

    // Argmax with exact ties resolved by table row order. Several rule pairs
    // share their binding literal under the near-flat default memberships
    // (a rule whose High set contains another's ties it exactly whenever the
    // shared sensors carry the minimum), and the stock table orders each
    // such pair superset-first, so row order is the stable resolution.
    GaitPhase winner = GaitPhase::Unknown;
    double best = -1.0;
    for (const Rule& r : config.table.rules) {
        const double grade = est.grades[static_cast<int>(r.phase)];
        if (grade > best) {
            best = grade;
            winner = r.phase;
        }
    }

    if (winner == state.committed) {
        state.candidate = GaitPhase::Unknown;
        state.run = 0;
    } else if (winner == state.candidate) {
        state.run += 1;
    } else {
        state.candidate = winner;
        state.run = 1;
    }
    if (state.candidate != GaitPhase::Unknown && state.run >= config.k) {
        state.committed = state.candidate;
        state.candidate = GaitPhase::Unknown;
        state.run = 0;
    }

    est.selected = state.committed;
    return {est, state};
}

ClassifierConfig classifier_config_from_json(const nlohmann::json& doc) {
    ClassifierConfig cfg;
    cfg.membership.s = doc.value("s", cfg.membership.s);
    cfg.membership.f0 = doc.value("f0", cfg.membership.f0);
    cfg.membership.scale = doc.value("scale", cfg.membership.scale);
    cfg.k = doc.value("k", cfg.k);
    cfg.contact_epsilon = doc.value("contact_epsilon", cfg.contact_epsilon);
    if (doc.contains("side")) {
        cfg.table.side = doc.at("side").get<std::string>() == "left" ? Side::Left : Side::Right;
    }
    if (doc.contains("rules")) {
        const auto& rules = doc.at("rules");
        if (!rules.is_array() || rules.size() != kNumPhases) {
            throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "'rules' must list 8 entries");
        }
        for (int r = 0; r < kNumPhases; ++r) {
            const auto& jr = rules[r];
            cfg.table.rules[r].phase = phase_from_name(jr.at("phase").get<std::string>());
            const auto& lits = jr.at("literals");
            if (!lits.is_array() || lits.size() != kNumChannels) {
                throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "each rule needs 6 literals");
            }
            for (int c = 0; c < kNumChannels; ++c) {
                const auto s = lits[c].get<std::string>();
                if (s != "high" && s != "low") {
                    throw fuzzy_error(FuzzyErrorKind::BadRuleTable,
                                      "literals must be 'high' or 'low'");
                }
                cfg.table.rules[r].literals[c] = s == "high" ? Literal::High : Literal::Low;
            }
        }
    }
    validate_rule_table(cfg.table);
    if (cfg.k < 1) throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "k must be >= 1");
    return cfg;
}

nlohmann::json classifier_config_to_json(const ClassifierConfig& config) {
    nlohmann::json doc;
    doc["s"] = config.membership.s;
    doc["f0"] = config.membership.f0;
    doc["scale"] = config.membership.scale;
    doc["k"] = config.k;
    doc["contact_epsilon"] = config.contact_epsilon;
    doc["side"] = config.table.side == Side::Left ? "left" : "right";
    auto& rules = doc["rules"] = nlohmann::json::array();
    for (const Rule& r : config.table.rules) {
        nlohmann::json jr;
        jr["phase"] = phase_name(r.phase);
        auto& lits = jr["literals"] = nlohmann::json::array();
        for (Literal lit : r.literals) lits.push_back(lit == Literal::High ? "high" : "low");
        rules.push_back(std::move(jr));
    }
    return doc;
}

ClassifierConfig load_classifier_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw fuzzy_error(FuzzyErrorKind::BadRuleTable, "cannot open rules config: " + path);
    }
    return classifier_config_from_json(nlohmann::json::parse(in));
}

}  // namespace exogait::fuzzy
