#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "grm/cache.hpp"
#include "grm/density.hpp"
#include "grm/errors.hpp"
#include "grm/json_io.hpp"

using namespace grm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("grm-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static inline int counter = 0;
};

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args, const fs::path& cache_dir) {
    std::string command = "cd " + cache_dir.string() + " && GRM_CACHE=" + cache_dir.string() +
                          " " + GRM_CLI_PATH + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

}  // namespace

TEST_SUITE_BEGIN("cache_cli");

TEST_CASE("checksums are stable") {
    CHECK(checksum_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64("a") != fnv1a64("b"));
}

TEST_CASE("cache stores and reloads spectra byte-for-byte") {
    TempDir dir;
    SpectrumCache cache(SpectrumCache::Policy::use, dir.path.string());
    CodeParams params{FieldParams(2), 1, 1};
    WeightSpectrum spectrum = cache.get_or_compute(params, {}, 1);
    CHECK(spectrum.counts.at(0) == 1);
    CHECK(spectrum.counts.at(1) == 2);
    CHECK(spectrum.counts.at(2) == 1);
    CHECK(fs::exists(cache.path_for(params)));

    auto reloaded = cache.load(params);
    REQUIRE(reloaded);
    CHECK(reloaded->counts == spectrum.counts);
    CHECK(reloaded->params == params);
    CHECK(reloaded->mode == spectrum.mode);
    CHECK(spectrum_payload_json(*reloaded) == spectrum_payload_json(spectrum));
}

TEST_CASE("a flipped payload byte is rejected by checksum") {
    TempDir dir;
    SpectrumCache cache(SpectrumCache::Policy::use, dir.path.string());
    CodeParams params{FieldParams(2), 1, 1};
    cache.store(enumerate_spectrum(params));

    fs::path file = cache.path_for(params);
    std::ifstream in(file);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string contents = buf.str();
    size_t pos = contents.find("\"1\"");  // the count of weight-1 codewords... flip a digit
    REQUIRE(pos != std::string::npos);
    contents[pos + 1] = '2';
    std::ofstream(file, std::ios::trunc) << contents;

    CHECK_THROWS_AS(cache.load(params), CacheError);

    // refresh recomputes instead of erroring
    SpectrumCache refresher(SpectrumCache::Policy::refresh, dir.path.string());
    CHECK_FALSE(refresher.load(params).has_value());
    WeightSpectrum recomputed = refresher.get_or_compute(params, {}, 1);
    CHECK(recomputed.counts.at(1) == 2);
    SpectrumCache reader(SpectrumCache::Policy::use, dir.path.string());
    CHECK(reader.load(params).has_value());  // overwritten with a valid file
}

TEST_CASE("policy off never touches the filesystem") {
    TempDir dir;
    SpectrumCache cache(SpectrumCache::Policy::off, dir.path.string());
    CodeParams params{FieldParams(2), 1, 2};
    WeightSpectrum spectrum = cache.get_or_compute(params, {}, 1);
    CHECK(spectrum.total() == 8);
    CHECK_FALSE(fs::exists(cache.path_for(params)));
}

TEST_CASE("reduced spectra are never file-cached") {
    TempDir dir;
    SpectrumCache cache(SpectrumCache::Policy::use, dir.path.string());
    CodeParams params{FieldParams(2), 2, 3};
    WeightSpectrum reduced = enumerate_spectrum(params, {}, 1, EnumerationMode::symmetry_reduced);
    cache.store(reduced);
    CHECK_FALSE(fs::exists(cache.path_for(params)));
}

TEST_CASE("gap_scan reuses the cache through the provider") {
    TempDir dir;
    SpectrumCache cache(SpectrumCache::Policy::use, dir.path.string());
    GapReport r1 = gap_scan(TargetValue::parse("1/2"), FieldParams(3), 1, 2, {}, 1,
                            cache.provider({}, 1));
    CHECK(fs::exists(dir.path / "grm_p3_r1_m1.json"));
    CHECK(fs::exists(dir.path / "grm_p3_r1_m2.json"));
    GapReport r2 = gap_scan(TargetValue::parse("1/2"), FieldParams(3), 1, 2, {}, 1,
                            cache.provider({}, 1));
    CHECK(gap_report_json(r1) == gap_report_json(r2));
}

TEST_CASE("cli: identical requests produce byte-identical documents") {
    TempDir dir;
    CliResult cold = run_cli("spectrum -p 2 -r 2 -m 3 --format json", dir.path);
    CHECK(cold.exit_code == 0);
    CliResult warm = run_cli("spectrum -p 2 -r 2 -m 3 --format json", dir.path);
    CHECK(warm.exit_code == 0);
    CHECK(cold.output == warm.output);
    CHECK(fs::exists(dir.path / "grm_p2_r2_m3.json"));

    CliResult gap1 = run_cli("gap --alpha 1/2 -p 3 -r 1 --max-m 2", dir.path);
    CliResult gap2 = run_cli("gap --alpha 1/2 -p 3 -r 1 --max-m 2", dir.path);
    CHECK(gap1.exit_code == 0);
    CHECK(gap1.output == gap2.output);
    CHECK(gap1.output.find("\"overall_gap\": \"1/6\"") != std::string::npos);
}

TEST_CASE("cli: dispatch produces the pinned example documents") {
    TempDir dir;
    CliResult binomial = run_cli("spectrum -p 2 -r 2 -m 2 --format json", dir.path);
    CHECK(binomial.exit_code == 0);
    WeightSpectrum spectrum = spectrum_from_payload_json(binomial.output);
    CHECK(spectrum.counts ==
          std::map<uint64_t, BigInt>{{0, 1}, {1, 4}, {2, 6}, {3, 4}, {4, 1}});

    CliResult rank = run_cli("rank --poly x1*x2+x3*x4 -p 2 -d 1", dir.path);
    CHECK(rank.exit_code == 0);
    CHECK(rank.output.find("\"status\": \"exact\"") != std::string::npos);
    CHECK(rank.output.find("\"value\": 4") != std::string::npos);

    CliResult gap = run_cli("gap --alpha 1/2 -p 3 -r 1 --max-m 3", dir.path);
    CHECK(gap.exit_code == 0);
    CHECK(gap.output.find("\"overall_gap\": \"1/6\"") != std::string::npos);
}

TEST_CASE("cli: documents carry no floating-point values") {
    TempDir dir;
    for (const char* args : {"weightset -p 2 -r 2 -m 4", "gap --alpha 2/7 -p 2 -r 2 --max-m 3",
                             "distance --poly x1*x2 -p 2", "rank --poly x1*x2+x3*x4 -p 2 -d 1"}) {
        CliResult result = run_cli(args, dir.path);
        CAPTURE(args);
        CHECK(result.exit_code == 0);
        CHECK(result.output.find("0.") == std::string::npos);
        CHECK(result.output.find("e-") == std::string::npos);
    }
}

TEST_CASE("cli: exit codes separate usage, domain and success") {
    TempDir dir;
    CHECK(run_cli("spectrum -p 2 -r 1 -m 1", dir.path).exit_code == 0);
    CHECK(run_cli("spectrum --no-such-flag", dir.path).exit_code == 2);
    CHECK(run_cli("spectrum -r 1 -m 1", dir.path).exit_code == 0);  // default p=2

    CliResult bad_prime = run_cli("spectrum -p 4 -r 1 -m 1", dir.path);
    CHECK(bad_prime.exit_code == 1);
    CHECK(bad_prime.output.find("\"error\"") != std::string::npos);

    CliResult budget = run_cli("spectrum -p 2 -r 2 -m 5 --budget 100", dir.path);
    CHECK(budget.exit_code == 1);
    CHECK(budget.output.find("\"budget\"") != std::string::npos);

    CliResult bad_poly = run_cli("rank --poly 'x1*' -p 2", dir.path);
    CHECK(bad_poly.exit_code == 1);

    CliResult bad_alpha = run_cli("gap --alpha 0.5 -p 3 -r 1 --max-m 2", dir.path);
    CHECK(bad_alpha.exit_code == 1);

    CliResult csv_structured = run_cli("gap --alpha 1/2 -p 3 -r 1 --max-m 2 --format csv", dir.path);
    CHECK(csv_structured.exit_code == 2);
}

TEST_CASE("cli: csv outputs for tabular documents") {
    TempDir dir;
    CliResult spectrum = run_cli("spectrum -p 2 -r 1 -m 2 --format csv", dir.path);
    CHECK(spectrum.exit_code == 0);
    CHECK(spectrum.output == "weight,count\n0,1\n2,6\n4,1\n");

    CliResult scan = run_cli("bias-scan -p 2 -r 1 -m 2 --format csv", dir.path);
    CHECK(scan.exit_code == 0);
    CHECK(scan.output.find("distance,rank\n0,inf\n") != std::string::npos);
}

TEST_CASE("cli: --out writes the same bytes as stdout") {
    TempDir dir;
    CliResult direct = run_cli("minweight -p 2 -r 2 -m 4 --mode enumerate", dir.path);
    fs::path out = dir.path / "doc.json";
    CliResult redirected =
        run_cli("minweight -p 2 -r 2 -m 4 --mode enumerate --out " + out.string(), dir.path);
    CHECK(redirected.exit_code == 0);
    std::ifstream in(out);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == direct.output);
    CHECK(direct.output.find("\"min_weight\": \"4\"") != std::string::npos);
}

TEST_SUITE_END();
