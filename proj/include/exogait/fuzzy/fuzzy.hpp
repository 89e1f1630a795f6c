#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace exogait::fuzzy {

enum class FuzzyErrorKind {
    NegativeReading,
    NoContact,
    BadRuleTable,
};

struct fuzzy_error : std::runtime_error {
    FuzzyErrorKind kind;
    fuzzy_error(FuzzyErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

/// The eight canonical walking-cycle segments plus Unknown (warm-up or both
/// feet airborne).
enum class GaitPhase : int {
    HeelStrike = 0,
    LoadingResponse = 1,
    MidStance = 2,
    TerminalStance = 3,
    PreSwing = 4,
    InitialSwing = 5,
    MidSwing = 6,
    TerminalSwing = 7,
    Unknown = 8,
};

constexpr int kNumPhases = 8;

const char* phase_name(GaitPhase p);
GaitPhase phase_from_name(std::string_view name);

/// FSR channel order used throughout the rule machinery:
/// left heel, left 5th metatarsal, left 1st metatarsal, then the right side.
enum FsrChannel : int { LH = 0, L5M = 1, L1M = 2, RH = 3, R5M = 4, R1M = 5 };
constexpr int kNumChannels = 6;

struct MembershipParams {
    double s = 0.15;    // sigmoid slope
    double f0 = 0.45;   // reading that grades to exactly 0.5
    double scale = 1.0; // multiplier applied to normalized readings before grading
};

struct NormalizedFsr {
    std::array<double, kNumChannels> values = {};
    bool no_contact = false;
};

struct LinguisticGrades {
    std::array<double, kNumChannels> high = {};
    std::array<double, kNumChannels> low = {};
};

enum class Literal : int { High, Low };
enum class Side : int { Left, Right };

struct Rule {
    GaitPhase phase;
    std::array<Literal, kNumChannels> literals;
};

/// One rule per phase; which foot the outcomes reference is carried in
/// `side` so mirroring is explicit.
struct RuleTable {
    std::array<Rule, kNumPhases> rules;
    Side side = Side::Right;
};

/// The stock right-referenced rule set.
RuleTable default_rule_table();

/// Variant with the heel-strike rule requiring R1M low instead of high.
RuleTable eq5_variant_rule_table();

/// Swaps the left- and right-foot literal columns, flipping the referenced
/// side. Involutive.
RuleTable mirror_rules(const RuleTable& table);

/// Throws BadRuleTable unless there is exactly one rule per phase and all
/// literal patterns are distinct.
void validate_rule_table(const RuleTable& table);

inline constexpr double kDefaultContactEpsilon = 40.0;  // ~1% of one sensor's full scale

/// Scales each reading by the sum of all six. Below the contact epsilon the
/// sample is flagged no-contact and zeroed.
NormalizedFsr normalize(const std::array<double, kNumChannels>& fsr_raw,
                        double contact_epsilon = kDefaultContactEpsilon);

/// Sigmoid membership grade: 1 / (1 + exp(-s * (f_star - f0))).
double membership(double f_star, const MembershipParams& params = {});

/// High = mu(F*), Low = 1 - High per channel. Throws NoContact on airborne
/// samples.
LinguisticGrades grades(const NormalizedFsr& n, const MembershipParams& params = {});

/// Min-combined rule evaluation; result indexed by GaitPhase.
std::array<double, kNumPhases> evaluate_rules(const LinguisticGrades& g,
                                              const RuleTable& table);

struct ClassifierConfig {
    MembershipParams membership;
    RuleTable table = default_rule_table();
    int k = 3;  // consecutive frames required to commit a phase change
    double contact_epsilon = kDefaultContactEpsilon;
};

/// Hysteresis state threaded through classify(); one instance per stream.
struct SmoothingState {
    GaitPhase committed = GaitPhase::Unknown;
    GaitPhase candidate = GaitPhase::Unknown;
    int run = 0;
};

struct PhaseEstimate {
    std::array<double, kNumPhases> grades = {};
    GaitPhase selected = GaitPhase::Unknown;
    std::int64_t frame_index = 0;
};

/// Full per-frame pipeline: normalize -> grades -> evaluate_rules -> argmax
/// with k-frame hysteresis. Exact grade ties resolve by table row order.
/// No-contact and warm-up frames yield Unknown.
std::pair<PhaseEstimate, SmoothingState> classify(
    const std::array<double, kNumChannels>& fsr_raw, SmoothingState state,
    const ClassifierConfig& config, std::int64_t frame_index = 0);

ClassifierConfig classifier_config_from_json(const nlohmann::json& doc);
nlohmann::json classifier_config_to_json(const ClassifierConfig& config);
ClassifierConfig load_classifier_config(const std::string& path);

}  // namespace exogait::fuzzy
