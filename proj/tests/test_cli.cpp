#include "qhomology/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace qh;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    static fs::path dir = [] {
        std::random_device rd;
        fs::path p = fs::temp_directory_path() /
                     ("qhomology_cli_test_" + std::to_string(rd()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_matrix_file(const std::string& name, int h, const ExactMatrix& m) {
    fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << matrix_to_json(h, m).dump() << "\n";
    return p;
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult verify(const cli::SuiteConfig& cfg) {
    std::ostringstream out, err;
    int code = cli::run_verify(cfg, out, err);
    return {code, out.str(), err.str()};
}

RunResult homology(const cli::HomologyArgs& args) {
    std::ostringstream out, err;
    int code = cli::run_homology(args, out, err);
    return {code, out.str(), err.str()};
}

RunResult feasibility_cmd(const cli::FeasibilityArgs& args) {
    std::ostringstream out, err;
    int code = cli::run_feasibility(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("field elements and matrices survive a JSON round trip") {
    const FieldContext& ctx = field_new(3);
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 5; ++trial) {
        ExactMatrix m(ctx, 4, 6);
        for (int e = 0; e < 9; ++e)
            m.set(static_cast<int>(rng() % 4), static_cast<int>(rng() % 6),
                  random_palette_scalar(ctx, rng, /*allow_zero=*/true));
        auto [h, back] = matrix_from_json(matrix_to_json(3, m));
        CHECK(h == 3);
        CHECK((back - m).is_zero());
    }

    // A scalar with large coordinates keeps exact precision through strings.
    Scalar big = ctx.from_rational(Rational(Integer("123456789012345678901234567890"),
                                            Integer("987654321098765432109")));
    Scalar round = scalar_from_json(ctx, scalar_to_json(big));
    CHECK((round - big).is_zero());
}

TEST_CASE("malformed matrix JSON is rejected with a reason") {
    const FieldContext& ctx = field_new(2);
    CHECK_THROWS_AS(scalar_from_json(ctx, Json::array({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(scalar_from_json(ctx, Json::array()), std::invalid_argument);

    Json good = matrix_to_json(2, ExactMatrix::identity(ctx, 2));
    Json missing = good;
    missing.erase("rows");
    CHECK_THROWS_AS(matrix_from_json(missing), std::invalid_argument);

    Json out_of_range = good;
    out_of_range["entries"].push_back(Json::array({5, 0, scalar_to_json(ctx.one())}));
    CHECK_THROWS_AS(matrix_from_json(out_of_range), std::invalid_argument);

    Json bad_height = good;
    bad_height["h"] = 1;
    CHECK_THROWS_AS(matrix_from_json(bad_height), std::invalid_argument);
}

TEST_CASE("check reports serialize pass/fail status with witnesses on failures") {
    CheckReport rep;
    rep.suite = "demo";
    rep.h = 2;
    rep.seed = 9;
    rep.add("alpha", true, "dropped");
    rep.add("beta", false, "cell (1, 2)");
    Json j = check_report_to_json(rep);
    CHECK(j["suite"] == "demo");
    CHECK(j["all_pass"] == false);
    CHECK(j["checks"][0]["status"] == "pass");
    CHECK_FALSE(j["checks"][0].contains("witness"));
    CHECK(j["checks"][1]["status"] == "fail");
    CHECK(j["checks"][1]["witness"] == "cell (1, 2)");
}

TEST_CASE("suite selection resolves in dependency order and applies the height cap") {
    cli::SuiteConfig cfg;
    cfg.heights = {4};
    cfg.suites = {"all"};
    std::vector<std::string> resolved;
    std::set<std::pair<std::string, int>> skips;
    CHECK(cli::resolve_config(cfg, resolved, skips).empty());
    CHECK(resolved == std::vector<std::string>{"relations", "theorem0", "section3", "theorem1",
                                               "hochschild"});
    CHECK(skips.count({"hochschild", 4}) == 1);

    cfg.force = true;
    skips.clear();
    CHECK(cli::resolve_config(cfg, resolved, skips).empty());
    CHECK(skips.empty());

    cfg.force = false;
    cfg.suites = {"hochschild"};
    std::string msg = cli::resolve_config(cfg, resolved, skips);
    CHECK_FALSE(msg.empty());
    CHECK(msg.find("--force") != std::string::npos);

    cfg.suites = {"theorem1", "relations"};
    cfg.heights = {2};
    REQUIRE(cli::resolve_config(cfg, resolved, skips).empty());
    CHECK(resolved == std::vector<std::string>{"relations", "theorem1"});

    cfg.suites = {"nope"};
    CHECK_FALSE(cli::resolve_config(cfg, resolved, skips).empty());
    cfg.suites = {"relations"};
    cfg.heights = {1};
    CHECK_FALSE(cli::resolve_config(cfg, resolved, skips).empty());
    cfg.heights = {2};
    cfg.trials = 0;
    CHECK_FALSE(cli::resolve_config(cfg, resolved, skips).empty());
}

TEST_CASE("verify refuses the capped suite at large heights before any work") {
    cli::SuiteConfig cfg;
    cfg.heights = {4};
    cfg.suites = {"hochschild"};
    RunResult r = verify(cfg);
    CHECK(r.code == 2);
    CHECK(r.err.find("--force") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("verify emits byte-identical JSON for identical config and seed") {
    cli::SuiteConfig cfg;
    cfg.heights = {2, 2}; // duplicates collapse
    cfg.suites = {"relations", "theorem0"};
    cfg.seed = 424242;
    cfg.format = "json";
    RunResult a = verify(cfg);
    RunResult b = verify(cfg);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    Json doc = Json::parse(a.out);
    CHECK(doc["schema"] == "qhomology/1");
    CHECK(doc["all_pass"] == true);
    CHECK(doc["config"]["heights"] == Json::array({2}));
    CHECK(doc["config"]["seed"] == 424242);
    REQUIRE(doc["runs"].size() == 2);
    CHECK(doc["runs"][0]["suite"] == "relations");
    CHECK(doc["runs"][1]["suite"] == "theorem0");
    for (const auto& run : doc["runs"]) CHECK(run["all_pass"] == true);
    CHECK(a.out.find("seconds") == std::string::npos); // timing kept out of JSON
}

TEST_CASE("verify text report names failing checks and returns exit one on failure") {
    // Text path smoke on a passing run; the failing path is driven at the
    // library level (corruption controls live in the model test suite).
    cli::SuiteConfig cfg;
    cfg.heights = {2};
    cfg.suites = {"relations"};
    RunResult r = verify(cfg);
    CHECK(r.code == 0);
    CHECK(r.out.find("RESULT: PASS") != std::string::npos);
    CHECK(r.out.find("suite relations (height 2) PASS") != std::string::npos);
}

TEST_CASE("verify writes the report to a file when asked") {
    cli::SuiteConfig cfg;
    cfg.heights = {2};
    cfg.suites = {"theorem0"};
    cfg.format = "json";
    fs::path out_file = scratch_dir() / "report.json";
    cfg.out_path = out_file.string();
    RunResult r = verify(cfg);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out_file);
    REQUIRE(in.good());
    Json doc = Json::parse(in);
    CHECK(doc["all_pass"] == true);
}

TEST_CASE("homology command reports dims, profile, and the closed-form cross-check") {
    const FieldContext& ctx3 = field_new(3);

    // One full-length block is acyclic.
    cli::HomologyArgs args;
    args.matrix_file = write_matrix_file("q3.json", 3, shift_block(ctx3, 3)).string();
    RunResult r = homology(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("homology dims (k = 1..2): 0 0") != std::string::npos);

    // The zero matrix has dim H = dim V at every order.
    const FieldContext& ctx2 = field_new(2);
    args.matrix_file = write_matrix_file("zero5.json", 2, ExactMatrix(ctx2, 5, 5)).string();
    r = homology(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("homology dims (k = 1..1): 5") != std::string::npos);

    // A mixed block sum, checked against the multiplicity formula in JSON.
    args.matrix_file =
        write_matrix_file("mixed.json", 3, block_diag_nilpotent(ctx3, {0, 1, 2})).string();
    args.format = "json";
    r = homology(args);
    CHECK(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["dims"] == Json::array({1, 1}));
    CHECK(doc["formula_agrees"] == true);
    CHECK(doc["profile"]["multiplicities"] == Json::array({0, 1, 2}));

    // Single-order query.
    args.format = "text";
    args.k = 2;
    r = homology(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("dim H_(2) = 1") != std::string::npos);

    args.k = 5;
    r = homology(args);
    CHECK(r.code == 2);
}

TEST_CASE("homology command rejects bad inputs and names the failing power") {
    const FieldContext& ctx2 = field_new(2);
    cli::HomologyArgs args;

    args.matrix_file = (scratch_dir() / "missing.json").string();
    CHECK(homology(args).code == 2);

    fs::path garbage = scratch_dir() / "garbage.json";
    std::ofstream(garbage) << "not json";
    args.matrix_file = garbage.string();
    CHECK(homology(args).code == 2);

    ExactMatrix rect(ctx2, 2, 3);
    args.matrix_file = write_matrix_file("rect.json", 2, rect).string();
    CHECK(homology(args).code == 2);

    args.matrix_file =
        write_matrix_file("ident.json", 2, ExactMatrix::identity(ctx2, 2)).string();
    RunResult r = homology(args);
    CHECK(r.code == 1);
    CHECK(r.err.find("smallest failing power is 1") != std::string::npos);

    args.matrix_file = write_matrix_file("q2.json", 2, shift_block(ctx2, 2)).string();
    args.height = 3;
    CHECK(homology(args).code == 2);
    args.height = 2;
    CHECK(homology(args).code == 0);
}

TEST_CASE("feasibility command reports verdicts and witnesses") {
    cli::FeasibilityArgs args;
    args.dim = 16;
    args.height = 2;
    RunResult r = feasibility_cmd(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("infeasible") != std::string::npos);

    args.dim = 3;
    args.format = "json";
    r = feasibility_cmd(args);
    CHECK(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["feasible"] == true);
    bool found = false;
    for (const auto& w : doc["witnesses"])
        if (w == Json::array({1, 1})) found = true;
    CHECK(found);

    args.dim = 81;
    args.height = 3;
    r = feasibility_cmd(args);
    CHECK(Json::parse(r.out)["feasible"] == false);

    args.dim = -1;
    CHECK(feasibility_cmd(args).code == 2);
}

TEST_CASE("model cache round trips, validates, and survives corruption") {
    fs::path cache = scratch_dir() / "cache";
    cli::SuiteConfig cfg;
    cfg.heights = {2};
    cfg.cache_dir = cache.string();

    std::ostringstream err1;
    ZeroModeModel fresh = cli::make_model(cfg, 2, err1);
    fs::path cache_file = cache / model_cache_filename(2);
    REQUIRE(fs::exists(cache_file));
    CHECK(err1.str().empty());

    std::ostringstream err2;
    ZeroModeModel cached = cli::make_model(cfg, 2, err2);
    CHECK(err2.str().empty());
    CHECK((cached.a[1][0] - fresh.a[1][0]).is_zero());
    CHECK((cached.a[1][1] - fresh.a[1][1]).is_zero());
    CHECK(verify_matrix_relations(cached).all_pass());

    // Garbage in the cache file falls back to a rebuild.
    std::ofstream(cache_file) << "{corrupt";
    std::ostringstream err3;
    ZeroModeModel rebuilt = cli::make_model(cfg, 2, err3);
    CHECK(verify_matrix_relations(rebuilt).all_pass());

    // A well-formed cache holding wrong matrices is rejected by validation.
    const FieldContext& ctx = field_new(2);
    save_lowering_cache(cache.string(), 2, ExactMatrix::identity(ctx, 4),
                        ExactMatrix::identity(ctx, 4));
    std::ostringstream err4;
    ZeroModeModel revalidated = cli::make_model(cfg, 2, err4);
    CHECK(err4.str().find("failed validation") != std::string::npos);
    CHECK(verify_matrix_relations(revalidated).all_pass());

    // --no-cache bypasses reads and writes entirely.
    cfg.no_cache = true;
    fs::remove(cache_file);
    std::ostringstream err5;
    ZeroModeModel direct = cli::make_model(cfg, 2, err5);
    CHECK(verify_matrix_relations(direct).all_pass());
    CHECK_FALSE(fs::exists(cache_file));
}
