#include "doctest.h"

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace logflat;
using cli::Json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

std::string data(const std::string& name) { return std::string(LOGFLAT_TEST_DATA_DIR) + "/" + name; }

Outcome run(std::vector<std::string> args)
{
    args.insert(args.begin(), "logflat-cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

Outcome run_job(const std::string& command, const std::string& file, std::vector<std::string> extra = {})
{
    std::vector<std::string> args{command, "--input", data(file)};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
}

Outcome run_inline(const std::string& command, const Json& job)
{
    const auto path = std::filesystem::temp_directory_path() / ("logflat_cli_" + command + ".json");
    std::ofstream(path) << job.dump();
    return run({command, "--input", path.string()});
}

}  // namespace

TEST_CASE("basis of the three-by-three example")
{
    const auto r = run_job("basis", "example_basis.json");
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["U0_1"] == Json({"y*E21*beta", "y^2*E12*beta", "x*y^4*E23*beta", "x^2*y^2*E13*beta", "y^7*E13*beta"}));
    CHECK(j["U0_0"].size() == 6);
    CHECK(j["H0"] == Json({"E11", "E22", "E33", "f*E23"}));
    CHECK(j["H1"] == Json({"y*E21", "y^2*E12", "y^2*f*E13"}));
    CHECK(j["weight_bases"]["10"] == Json({"x^2", "y^5"}));
}

TEST_CASE("minimal basis job")
{
    const auto r = run_job("basis", "trivial_basis.json");
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["U0_0"] == Json({"E11"}));
    CHECK(j["U0_1"].empty());
    CHECK(j["H1"].empty());
}

TEST_CASE("input errors exit with code 2")
{
    const auto r = run_job("basis", "not_coprime.json");
    CHECK(r.code == 2);
    CHECK(r.err.find("p,q must be coprime") != std::string::npos);
    CHECK(r.out.empty());

    CHECK(run({"basis", "--input", data("missing.json")}).code == 2);
    CHECK(run({"frobnicate", "--input", data("trivial_basis.json")}).code == 2);
    CHECK(run({"basis"}).code == 2);
    CHECK(run_inline("basis", Json{{"p", 2}, {"q", 3}, {"n", 2}, {"S", {"0"}}}).code == 2);
    CHECK(run_inline("basis", Json{{"p", 2}, {"q", 3}, {"n", 1}, {"S", {"0"}}, {"colour", "red"}}).code == 2);
    CHECK(run_inline("basis", Json{{"p", 2}, {"q", 3}, {"n", 1}, {"S", {"1/0"}}}).code == 2);
    // N0 must be nilpotent and commute with S
    CHECK(run_inline("mc", Json{{"p", 2}, {"q", 3}, {"n", 2}, {"S", {"0", "1"}}, {"N0", {{"0", "1"}, {"0", "0"}}}}).code == 2);
    // unknown basis label
    CHECK(run_inline("mc", Json{{"p", 2}, {"q", 5}, {"n", 3}, {"S", {"0", "1", "11"}},
                                {"connection", {{"C", {{"y^3*E21", "1"}}}}}})
              .code == 2);
}

TEST_CASE("families of the example verify as flat")
{
    for (const char* file : {"family_product_110.json", "family_c12_zero.json"}) {
        const auto r = run_job("mc", file, {"--seed", "3"});
        REQUIRE(r.code == 0);
        const Json j = r.json();
        CHECK(j["verdict"] == "pass");
        CHECK(j["family"]["identically_flat"] == true);
        CHECK(j["family"]["residuals"].empty());
        for (const auto& pt : j["family"]["points"]) CHECK(pt["report"]["flat"] == true);
    }
    const Json b = run_job("mc", "family_product_110.json").json();
    CHECK(b["family"]["invariants"]["C21*C12"] == "110/1");
    CHECK(b["family"]["points"].size() == 21);
    for (const auto& pt : b["family"]["points"]) CHECK(pt["report"]["invariants"]["C21*C12"] == "110/1");
}

TEST_CASE("zero connection and a non-flat point")
{
    const auto zero = run_job("mc", "zero_connection.json");
    CHECK(zero.code == 0);
    CHECK(zero.json()["connection"]["nonzero_residuals"] == 0);

    const auto bad = run_job("mc", "non_flat.json");
    CHECK(bad.code == 1);
    const Json j = bad.json();
    CHECK(j["verdict"] == "fail");
    // C21 = C12 = 1, N1 = 0, N2 = 1: residual of x y^4 E23 is 20 N2 + C21 N13 = 20.
    CHECK(j["connection"]["residual"]["x*y^4*E23"] == "20/1");
    CHECK(j["connection"]["residual"]["y*E21"] == "0/1");
}

TEST_CASE("normalize returns the gauge word")
{
    const auto r = run_job("normalize", "normalize_generic.json");
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["in_H1"] == true);
    CHECK(j["gauge_word_consistent"] == true);
    CHECK(j["normalized"]["C"]["y*E21"] == "2/1");
    CHECK(j["normalized"]["C"]["y^2*E12"] == "3/1");
    // the E13 part is a multiple of y^2 f
    CHECK(j["normalized"]["C"]["x^2*y^2*E13"].get<std::string>() ==
          "-" + j["normalized"]["C"]["y^7*E13"].get<std::string>());
    CHECK_FALSE(j["normalized"]["C"].contains("x*y^4*E23"));
}

TEST_CASE("tangent cohomology")
{
    const auto rigid = run_job("tangent", "tangent_rigid.json");
    REQUIRE(rigid.code == 0);
    const Json j = rigid.json();
    CHECK(j["H1_U0_dim"] == 0);
    // C is gauge trivial; the remaining directions are N in {f E12, f E23, f^2 E13}.
    CHECK(j["finite"]["cohomology"]["h1"] == 3);
    CHECK(j["slice_model_agrees"] == true);

    const Json k = run_job("tangent", "tangent_flat_point.json").json();
    CHECK(k["verdict"] == "pass");
    CHECK(k["quasi_isomorphic"] == true);

    CHECK(run_job("tangent", "non_flat.json").code == 1);
}

TEST_CASE("perturbation lemma on family points and the injected failure")
{
    const auto r = run_job("hpt", "hpt_family_product_110.json");
    REQUIRE(r.code == 0);
    const Json j = r.json();
    CHECK(j["points"].size() == 3);
    for (const auto& pt : j["points"]) {
        CHECK(pt["a_unchanged"] == true);
        CHECK(pt["b_unchanged"] == true);
        CHECK(pt["failing_identities"].empty());
    }

    const auto bad = run_job("hpt", "hpt_family_product_110.json", {"--inject-side-condition-failure"});
    CHECK(bad.code == 1);
    const auto failing = bad.json()["points"][0]["failing_identities"];
    CHECK(std::find(failing.begin(), failing.end(), Json("h a = 0")) != failing.end());
}

TEST_CASE("Manin triple reports")
{
    for (const char* file : {"manin_gl2.json", "manin_gl3.json"}) {
        const auto r = run_job("manin", file);
        CHECK(r.code == 0);
        const Json j = r.json();
        CHECK(j["verdict"] == "pass");
        for (const auto& c : j["checks"]) CHECK(c["pass"] == true);
    }
    const Json j = run_job("manin", "manin_gl3.json").json();
    CHECK(j["dims"]["L"] == 14);
    CHECK(j["dims"]["jacobi_quotient"] == 4);
    CHECK(j["bases"]["n_plus"] == Json({"y^2*f*E13"}));
}

TEST_CASE("reports are byte-identical across runs and honour --out and --wmax")
{
    for (const auto& [cmd, file] : {std::pair{"basis", "example_basis.json"}, {"mc", "family_product_110.json"},
                                    {"normalize", "normalize_generic.json"}, {"manin", "manin_gl2.json"}}) {
        CHECK(run_job(cmd, file, {"--seed", "11"}).out == run_job(cmd, file, {"--seed", "11"}).out);
    }
    const auto path = (std::filesystem::temp_directory_path() / "logflat_cli_out.json").string();
    const auto r = run_job("basis", "example_basis.json", {"--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == run_job("basis", "example_basis.json").out);

    CHECK(run_job("basis", "example_basis.json", {"--wmax", "40"}).json()["job"]["wmax"] == 40);
    CHECK(run_job("normalize", "normalize_generic.json", {"--wmax", "5"}).code == 2);
}
