#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "csim/certificate.hpp"
#include "csim/cli.hpp"
#include "csim/grid.hpp"
#include "csim/io.hpp"
#include "csim/rays.hpp"
#include "csim/similarity.hpp"

using namespace csim;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "csim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "csim_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path certificate_in(const fs::path& dir) {
    REQUIRE(run({"find-misiurewicz", "--seed_a", "0.45", "--seed_v", "0.45", "--output_dir", dir.string()}).code == 0);
    return dir / "certificate.json";
}

}  // namespace

TEST_CASE("configuration parsing") {
    const KeyValues kv = parse_key_values("# comment\np = 2\nseed_a=0.1,-0.2  # trailing\n\nr=1.5\n");
    CHECK(kv.at("p") == "2");
    CHECK(kv.at("seed_a") == "0.1,-0.2");
    const RunConfig c = build_config("find-misiurewicz", kv);
    CHECK(c.p == 2);
    CHECK(*c.seed_a == Complex(0.1, -0.2));
    CHECK(c.r == 1.5);
    CHECK(c.resolution == 512);

    auto message = [](const std::function<void()>& fn) {
        try {
            fn();
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Config);
            return std::string(e.what());
        }
        FAIL("expected a configuration error");
        return std::string();
    };
    CHECK(message([] { parse_key_values("bogus=1\n"); }).find("'bogus'") != std::string::npos);
    CHECK(message([] { parse_key_values("p 1\n"); }).find("line 1") != std::string::npos);
    CHECK(message([] { build_config("find-misiurewicz", {{"resolution", "1"}}); }).find("'resolution'") !=
          std::string::npos);
    CHECK(message([] { build_config("find-misiurewicz", {{"theta", "1.5"}}); }).find("'theta'") != std::string::npos);
    CHECK(message([] { build_config("find-misiurewicz", {{"r", "abc"}}); }).find("'r'") != std::string::npos);
    CHECK(message([] { build_config("find-misiurewicz", {{"k_min", "5"}, {"k_max", "4"}}); }).find("'k_max'") !=
          std::string::npos);
    CHECK(message([] { build_config("fly", {}); }).find("'command'") != std::string::npos);
}

TEST_CASE("flags override the config file") {
    const fs::path dir = scratch("override");
    write_file_atomic(dir / "run.cfg", "seed_a = 9\nseed_v = 0.45\noutput_dir = " + dir.string() + "\n");
    const Run r = run({"find-misiurewicz", "--config", (dir / "run.cfg").string(), "--seed_a", "0.45"});
    CHECK(r.code == 0);
    CHECK(r.out.find("a 0.5") == 0);
}

TEST_CASE("find-misiurewicz") {
    const fs::path dir = scratch("find");
    const fs::path cert_path = certificate_in(dir);
    const MisiurewiczCertificate cert = certificate_from_json(read_file(cert_path));
    CHECK(std::abs(cert.map.a - 0.5) <= 1e-11);
    CHECK(std::abs(cert.lambda0 - 2.25) <= 1e-10);
    CHECK(certificate_to_json(cert) == read_file(cert_path));

    const fs::path again = dir / "again";
    CHECK(run({"find-misiurewicz", "--certificate", cert_path.string(), "--output_dir", again.string()}).code == 0);
    CHECK(read_file(again / "certificate.json") == read_file(cert_path));

    const Run bad = run({"find-misiurewicz", "--seed_a", "40,30", "--seed_v", "-70", "--output_dir", dir.string()});
    CHECK(bad.code == 2);
    CHECK(run({"find-misiurewicz", "--seed_a", "0.45", "--output_dir", dir.string()}).code == 4);
    CHECK(run({"find-misiurewicz", "--nonsense", "1"}).code == 4);
    CHECK(run({"find-misiurewicz", "--certificate", (dir / "missing.json").string()}).code == 4);
}

TEST_CASE("render-julia") {
    const fs::path dir = scratch("julia");
    CHECK(run({"render-julia", "--a", "0", "--v", "0", "--r", "2", "--resolution", "128", "--output_dir",
               dir.string()}).code == 0);
    const GridSet disk = from_pgm(read_file(dir / "julia.pgm"));
    const double area = double(disk.count()) * disk.cell_size() * disk.cell_size();
    CHECK(std::abs(area - M_PI) <= 0.03 * M_PI);
    for (std::size_t j = 0; j < 128; ++j) {
        for (std::size_t i = 0; i < 128; ++i) {
            const double m = std::abs(disk.center(i, j));
            if (m < 0.97) CHECK(disk.get(i, j));
            if (m > 1.03) CHECK_FALSE(disk.get(i, j));
        }
    }
    const std::string first = read_file(dir / "julia.pgm");
    CHECK(run({"render-julia", "--a", "0", "--v", "0", "--r", "2", "--resolution", "128", "--output_dir",
               dir.string()}).code == 0);
    CHECK(read_file(dir / "julia.pgm") == first);
    CHECK(run({"render-julia", "--a", "0", "--output_dir", dir.string()}).code == 4);
}

TEST_CASE("trace-ray") {
    const fs::path dir = scratch("ray");
    const Run r = run({"trace-ray", "--a", "0.5", "--v", "0.5", "--theta", "0", "--output_dir",
                       dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("landed true") != std::string::npos);
    const RayTrace ray = ray_from_csv(read_file(dir / "ray.csv"), 0.0);
    REQUIRE(ray.samples.size() == 41);
    for (std::size_t i = 1; i < ray.samples.size(); ++i) CHECK(ray.samples[i].s < ray.samples[i - 1].s);
    CHECK(run({"trace-ray", "--a", "0.5", "--v", "0.5", "--output_dir", dir.string()}).code == 4);
}

TEST_CASE("verify-similarity writes one raster per mode and k") {
    const fs::path dir = scratch("similarity");
    const fs::path cert = certificate_in(dir);
    const fs::path out = dir / "run";
    const std::vector<std::string> args{"verify-similarity", "--certificate", cert.string(), "--k_min", "3",
                                        "--k_max", "4", "--resolution", "48", "--max_iter", "200",
                                        "--output_dir", out.string()};
    CHECK(run(args).code == 0);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(out)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"limit_model_k3.pgm", "limit_model_k4.pgm", "report.csv",
                                            "rescaled_julia_k3.pgm", "rescaled_julia_k4.pgm",
                                            "rescaled_locus_k3.pgm", "rescaled_locus_k4.pgm"});
    std::map<std::string, std::string> first;
    for (const auto& n : names) first[n] = read_file(out / n);
    CHECK(run(args).code == 0);
    for (const auto& n : names) CHECK(read_file(out / n) == first[n]);

    CHECK(run({"verify-similarity", "--certificate", cert.string(), "--k_min", "1", "--k_max", "2",
               "--resolution", "32", "--output_dir", out.string()}).code == 3);
    CHECK(run({"verify-similarity", "--certificate", cert.string(), "--k_min", "3", "--k_max", "40",
               "--resolution", "32", "--output_dir", out.string()}).code == 3);
}

TEST_CASE("render-locus, transversality and landing-check") {
    const fs::path dir = scratch("misc");
    const fs::path cert = certificate_in(dir);
    CHECK(run({"render-locus", "--certificate", cert.string(), "--r", "0.05", "--resolution", "32", "--output_dir",
               dir.string()}).code == 0);
    const GridSet locus = from_pgm(read_file(dir / "locus.pgm"));
    CHECK(locus.get(16, 16) == locus_membership(chart_point(certificate_from_json(read_file(cert)).chart,
                                                            locus.center(16, 16)), 500));
    CHECK(run({"render-locus", "--certificate", cert.string(), "--r", "1", "--output_dir", dir.string()}).code == 3);

    const Run t = run({"transversality", "--certificate", cert.string(), "--output_dir", dir.string()});
    CHECK(t.code == 0);
    CHECK(t.out == "winding 1\n");

    const Run l = run({"landing-check", "--certificate", cert.string(), "--theta", "0", "--output_dir", dir.string()});
    CHECK(l.code == 0);
    CHECK(l.out.find("shrinking true") != std::string::npos);
    CHECK(read_file(dir / "landing.csv").rfind("s,t_re,t_im,param_angle\n", 0) == 0);
    CHECK(run({"landing-check", "--certificate", cert.string(), "--theta", "0.5", "--output_dir", dir.string()})
              .code == 2);
}
