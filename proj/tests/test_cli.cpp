#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "exogait/cli/cli.hpp"
#include "exogait/protocol/assembler.hpp"
#include "exogait/protocol/codec.hpp"
#include "exogait/sim/sim.hpp"
#include <random>
#include <set>

namespace fs = std::filesystem;
using exogait::cli::run;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("exogait_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

struct LabelRow {
    double t_ms;
    std::string phase;
    std::string event_kind;
    std::string event_side;
};

std::vector<LabelRow> read_labels(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::string line;
    std::getline(in, line);  // header
    std::vector<LabelRow> rows;
    while (std::getline(in, line)) {
        LabelRow r;
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');  // frame_index
        std::getline(ss, cell, ',');
        r.t_ms = std::stod(cell);
        std::getline(ss, r.phase, ',');
        std::getline(ss, r.event_kind, ',');
        std::getline(ss, r.event_side, ',');
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::string> read_selected(const std::string& phases_csv) {
    std::ifstream in(phases_csv);
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> out;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        out.push_back(cell);
    }
    return out;
}

int simulate_into(const TempDir& dir, const std::string& sub,
                  const std::vector<std::string>& extra = {}) {
    fs::create_directories(dir.path / sub);
    std::vector<std::string> args = {"simulate", "--out", (dir.path / sub).string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
}

}  // namespace

TEST_CASE("simulate: deterministic outputs, byte for byte") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "a", {"--seed", "7"}) == 0);
    REQUIRE(simulate_into(dir, "b", {"--seed", "7"}) == 0);
    for (const char* f : {"frames.csv", "labels.csv", "packets.ndjson"}) {
        CHECK(slurp(dir / ("a/" + std::string(f))) == slurp(dir / ("b/" + std::string(f))));
    }
    CHECK(fs::exists(dir.path / "a/manifest.json"));

    const json manifest = json::parse(slurp(dir / "a/manifest.json"));
    CHECK(manifest.at("command") == "simulate");
    CHECK(manifest.at("params").at("noise").at("seed") == 7);
}

TEST_CASE("simulate: malformed profile names the offending key") {
    TempDir dir;
    spit(dir / "bad.json", "{\"phase_fractions\": [0.5, 0.5]}");
    fs::create_directories(dir.path / "out");
    CHECK(run({"simulate", "--profile", dir / "bad.json", "--out", (dir.path / "out").string()}) == 2);

    spit(dir / "bad2.json", "{\"rate_hz\": -4}");
    CHECK(run({"simulate", "--profile", dir / "bad2.json", "--out", (dir.path / "out").string()}) == 2);
}

TEST_CASE("simulate: labels carry ten heel-strike transitions per side") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "t") == 0);
    const auto rows = read_labels(dir / "t/labels.csv");
    int left = 0, right = 0;
    for (const auto& r : rows) {
        if (r.event_kind.find("heel_strike") == std::string::npos) continue;
        std::istringstream kinds(r.event_kind), sides(r.event_side);
        std::string k, s;
        while (std::getline(kinds, k, ';') && std::getline(sides, s, ';')) {
            if (k != "heel_strike") continue;
            (s == "left" ? left : right) += 1;
        }
    }
    CHECK(left == 10);
    CHECK(right == 10);
}

TEST_CASE("estimate: noise-free frames agree with the labels") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "t") == 0);
    REQUIRE(run({"estimate", "--in", dir / "t/frames.csv", "--out", dir / "phases.csv"}) == 0);

    const auto labels = read_labels(dir / "t/labels.csv");
    const auto selected = read_selected(dir / "phases.csv");
    REQUIRE(labels.size() == selected.size());

    std::set<std::size_t> excl;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i].phase != labels[i - 1].phase) {
            for (int d = -3; d <= 3; ++d) {
                excl.insert(i + static_cast<std::size_t>(d));
            }
        }
    }
    std::size_t total = 0, agree = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (excl.count(i)) continue;
        ++total;
        agree += labels[i].phase == selected[i];
    }
    CHECK(static_cast<double>(agree) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("estimate: empty frames file exits 2") {
    TempDir dir;
    spit(dir / "empty.csv", "");
    CHECK(run({"estimate", "--in", dir / "empty.csv", "--out", dir / "p.csv"}) == 2);

    // Header-only counts as no frames.
    TempDir dir2;
    REQUIRE(simulate_into(dir2, "t") == 0);
    std::istringstream src(slurp(dir2 / "t/frames.csv"));
    std::string header;
    std::getline(src, header);
    spit(dir / "header_only.csv", header + "\n");
    CHECK(run({"estimate", "--in", dir / "header_only.csv", "--out", dir / "p.csv"}) == 2);
}

TEST_CASE("estimate: rule variants differ only around heel-strike selection") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "t") == 0);
    REQUIRE(run({"estimate", "--in", dir / "t/frames.csv", "--rules",
                 "configs/rules_table1.json", "--out", dir / "stock.csv"}) == 0);
    REQUIRE(run({"estimate", "--in", dir / "t/frames.csv", "--rules",
                 "configs/rules_eq5_variant.json", "--out", dir / "variant.csv"}) == 0);

    const auto stock = read_selected(dir / "stock.csv");
    const auto variant = read_selected(dir / "variant.csv");
    REQUIRE(stock.size() == variant.size());
    int diffs = 0;
    for (std::size_t i = 0; i < stock.size(); ++i) {
        if (stock[i] == variant[i]) continue;
        ++diffs;
        // Every divergence involves the heel-strike rule on exactly one side.
        CHECK((stock[i] == "heel_strike") != (variant[i] == "heel_strike"));
    }
    CHECK(diffs > 0);
}

TEST_CASE("analyze: oracle quantities and summary shape") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "t") == 0);
    REQUIRE(run({"analyze", "--in", dir / "t/frames.csv", "--out", dir / "report.json",
                 "--events-csv", dir / "events.csv"}) == 0);

    const json report = json::parse(slurp(dir / "report.json"));
    CHECK(report.at("rate_hz").get<double>() == doctest::Approx(130.0).epsilon(1e-6));

    // CoP against the independently generated truth.
    exogait::sim::GaitProfile prof;
    const auto trial = exogait::sim::generate_trial(prof, exogait::sim::NoiseModel{});
    const auto& y = report.at("cop").at("left").at("y_mm");
    REQUIRE(y.size() == trial.cop_truth[0].size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!trial.cop_truth[0][i].valid) continue;
        CHECK(std::abs(y[i].get<double>() - trial.cop_truth[0][i].y_mm) < 1e-6);
    }

    // 10 strides -> 9 stride durations per side, each near the step duration.
    for (const char* side : {"left", "right"}) {
        const auto& durations = report.at("stride_durations_s").at(side);
        REQUIRE(durations.size() == 9);
        for (const auto& d : durations) {
            CHECK(d.get<double>() == doctest::Approx(3.33).epsilon(0.02));
        }
        CHECK(report.at("summary").at("stride_duration_s").at(side).at("median").get<double>() ==
              doctest::Approx(3.33).epsilon(0.02));
    }
}

TEST_CASE("analyze: zero crutch load still reports inclination") {
    TempDir dir;
    spit(dir / "profile.json", "{\"crutch_peak_n\": 0.0, \"n_strides\": 2}");
    fs::create_directories(dir.path / "t");
    REQUIRE(run({"simulate", "--profile", dir / "profile.json", "--out",
                 (dir.path / "t").string()}) == 0);
    REQUIRE(run({"analyze", "--in", dir / "t/frames.csv", "--out", dir / "report.json"}) == 0);
    const json report = json::parse(slurp(dir / "report.json"));
    const auto& grf = report.at("grf").at("left");
    bool inclination_seen = false;
    for (std::size_t i = 0; i < grf.at("f_axial_n").size(); ++i) {
        CHECK(grf.at("f_axial_n")[i].get<double>() == 0.0);
        CHECK(grf.at("f_world_z_n")[i].get<double>() == 0.0);
        if (grf.at("inclination_deg")[i].get<double>() > 1.0) inclination_seen = true;
    }
    CHECK(inclination_seen);
}

TEST_CASE("compare: a series against itself is perfect agreement") {
    TempDir dir;
    std::string series = "# rate_hz=130\nt_ms,value\n";
    for (int i = 0; i < 300; ++i) {
        series += exogait::format_num(i * 7.692308) + "," +
                  exogait::format_num(std::sin(i * 0.1)) + "\n";
    }
    spit(dir / "a.csv", series);
    REQUIRE(run({"compare", "--a", dir / "a.csv", "--b", dir / "a.csv", "--out",
                 dir / "agreement.json"}) == 0);
    const json rep = json::parse(slurp(dir / "agreement.json"));
    CHECK(rep.at("rmse").get<double>() == 0.0);
    CHECK(rep.at("pearson_r").get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.at("loa_low").get<double>() == 0.0);
    CHECK(rep.at("loa_high").get<double>() == 0.0);
    CHECK(rep.at("wilcoxon_p").is_null());  // no nonzero differences
}

TEST_CASE("compare: constant series keep reporting, pearson goes null") {
    TempDir dir;
    std::string a = "# rate_hz=130\nt_ms,value\n", b = a;
    for (int i = 0; i < 100; ++i) {
        a += exogait::format_num(i * 7.692308) + ",2\n";
        b += exogait::format_num(i * 7.692308) + ",2.5\n";
    }
    spit(dir / "a.csv", a);
    spit(dir / "b.csv", b);
    REQUIRE(run({"compare", "--a", dir / "a.csv", "--b", dir / "b.csv", "--out",
                 dir / "agreement.json", "--no-filter"}) == 0);
    const json rep = json::parse(slurp(dir / "agreement.json"));
    CHECK(rep.at("pearson_r").is_null());
    CHECK(rep.at("rmse").get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(rep.at("median_diff").get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("compare: rate mismatch requires --align trigger") {
    TempDir dir;
    std::string fast = "# rate_hz=1500\nt_ms,value\n";
    std::string slow = "# rate_hz=130\nt_ms,value\n";
    for (int i = 0; i < 3000; ++i) {
        fast += exogait::format_num(i / 1.5) + "," +
                exogait::format_num(std::sin(2.0 * exogait::kPi * 2.0 * i / 1500.0)) + "\n";
    }
    for (int i = 0; i < 260; ++i) {
        slow += exogait::format_num(i * 7.692308) + "," +
                exogait::format_num(std::sin(2.0 * exogait::kPi * 2.0 * i / 130.0)) + "\n";
    }
    spit(dir / "fast.csv", fast);
    spit(dir / "slow.csv", slow);

    CHECK(run({"compare", "--a", dir / "fast.csv", "--b", dir / "slow.csv", "--out",
               dir / "x.json"}) == 2);
    REQUIRE(run({"compare", "--a", dir / "fast.csv", "--b", dir / "slow.csv", "--align",
                 "trigger", "--out", dir / "agreement.json"}) == 0);
    const json rep = json::parse(slurp(dir / "agreement.json"));
    CHECK(rep.at("rate_hz").get<double>() == doctest::Approx(130.0));
    CHECK(rep.at("rmse").get<double>() < 0.05);
    CHECK(rep.at("pearson_r").get<double>() > 0.99);
}

TEST_CASE("convert: reproduces simulate's frames byte for byte") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "t") == 0);
    REQUIRE(run({"convert", "--in", dir / "t/packets.ndjson", "--out", dir / "frames.csv"}) == 0);
    CHECK(slurp(dir / "frames.csv") == slurp(dir / "t/frames.csv"));
}

TEST_CASE("convert: corrupted packet reports its line number") {
    TempDir dir;
    REQUIRE(simulate_into(dir, "t") == 0);
    auto text = slurp(dir / "t/packets.ndjson");
    // Corrupt the third line.
    std::size_t pos = 0;
    for (int i = 0; i < 2; ++i) pos = text.find('\n', pos) + 1;
    text.insert(pos, "{broken");
    spit(dir / "bad.ndjson", text);
    CHECK(run({"convert", "--in", dir / "bad.ndjson", "--out", dir / "frames.csv"}) == 2);
}

TEST_CASE("convert: lossy transport yields binomial-scale packet loss") {
    TempDir dir;
    spit(dir / "transport.json", "{\"drop_prob\": 0.1, \"seed\": 3}");
    fs::create_directories(dir.path / "t");
    REQUIRE(run({"simulate", "--transport", dir / "transport.json", "--out",
                 (dir.path / "t").string()}) == 0);
    REQUIRE(run({"convert", "--in", dir / "t/packets.ndjson", "--out", dir / "frames.csv"}) == 0);

    // Re-run the assembly in process to read the slot accounting convert
    // reports: instants lacking a fresh packet track the binomial drop count.
    std::array<std::vector<exogait::protocol::SensorPacket>, 4> streams;
    std::istringstream in(slurp(dir / "t/packets.ndjson"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto p = exogait::protocol::decode_packet(line);
        streams[static_cast<int>(p.device)].push_back(std::move(p));
    }
    exogait::protocol::AssemblyStats stats;
    const auto frames = exogait::protocol::assemble_frames(streams, {}, &stats);
    REQUIRE(frames.size() > 4000);

    double missing = 0.0;
    for (const auto dev : exogait::protocol::kAllDevices) missing += stats.missing_fresh(dev);
    const double n = static_cast<double>(frames.size()) * 4.0;
    const double mean = 0.1 * n;
    const double sigma = std::sqrt(n * 0.1 * 0.9);
    CHECK(std::abs(missing - mean) <= 3.0 * sigma);
}
