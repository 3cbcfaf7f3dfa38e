#include "stateconv/cli.hpp"
#include "stateconv/errors.hpp"
#include "stateconv/random.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

using namespace stateconv;

namespace {

const std::string kData = STATECONV_DATA_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::initializer_list<std::string> args) {
  std::vector<std::string> store{"stateconv"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : store) argv.push_back(s.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(STATECONV_BINARY_DIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse function") {
  const FunctionSpec id =
      cli::parse_function_text(R"({"alphabet":2,"arity":1,"domain":["0","1"],"outputs":{"0":"0","1":"1"}})", "id");
  CHECK(id.domain == identity_bit().domain);
  CHECK(id.outputs == identity_bit().outputs);

  const FunctionSpec o = cli::parse_function(kData + "/or2.json");
  CHECK(o.size() == 4);
  CHECK(o.outputs == or_fn(2).outputs);

  const FunctionSpec f = cli::parse_function(kData + "/mixed.json");
  CHECK(f.alphabets == std::vector<std::string>{"01", "ABC"});
  CHECK(f.domain == std::vector<std::string>{"0A", "0B", "1C"});
}

TEST_CASE("parse errors carry line context") {
  try {
    cli::parse_function_text("{\n\"alphabet\": 2,\n\"arity\": 1,\n\"domain\": [\"0\" \"1\"]\n}", "f.json");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).rfind("f.json:4:", 0) == 0);
  }
  try {
    cli::parse_function_text("{\n\"alphabet\": 2,\n\"arity\": 1,\n\"domain\": [\"0\", \"2\"],\n\"outputs\": {\"0\": \"a\", \"2\": \"b\"}\n}",
                             "g.json");
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).rfind("g.json:4:", 0) == 0);
  }
  CHECK_THROWS_AS(cli::parse_function_text(R"({"alphabet":2,"arity":1,"domain":["0","1"],"outputs":{"0":"0"}})", "h"),
                  InputError);
  CHECK_THROWS_AS(cli::parse_function_text(R"({"alphabet":2,"domain":["0"],"outputs":{"0":"0"}})", "h"), InputError);
  CHECK_THROWS_AS(cli::parse_function_text(R"([1, 2])", "h"), InputError);
}

TEST_CASE("parse gram") {
  const CMatrix j = cli::parse_gram(kData + "/j2.json");
  CHECK((j - ones(2)).norm() == 0.0);
  std::string i4 = R"({"size": 4, "entries": [)";
  for (int k = 0; k < 16; ++k) i4 += std::string(k ? "," : "") + (k % 5 == 0 ? "[1,0]" : "[0,0]");
  i4 += "]}";
  CHECK((cli::parse_gram_text(i4, "i4") - identity(4)).norm() == 0.0);

  CHECK_THROWS_AS(cli::parse_gram_text(R"({"size": 2, "entries": [[1,0],[0,1],[0,0],[1,0]]})", "h"), InputError);
  CHECK_THROWS_AS(cli::parse_gram_text(R"({"size": 2, "entries": [[1,0],[2,0],[2,0],[1,0]]})", "p"), NotPsdError);
  CHECK_THROWS_AS(cli::parse_gram_text(R"({"size": 2, "entries": [[1,0],[0,0],[0,0]]})", "n"), InputError);
  CHECK_THROWS_AS(cli::parse_gram_text(R"({"size": 1, "entries": ["1"]})", "s"), InputError);
}

TEST_CASE("gram round trip is bit exact") {
  Rng rng = make_rng(41);
  for (int t = 0; t < 5; ++t) {
    std::vector<CVector> v;
    for (int i = 0; i < 4; ++i) v.push_back(random_unit(rng, 3));
    CMatrix g = gram(v);
    for (int i = 0; i < 4; ++i) g(i, i) = g(i, i).real();
    const CMatrix back = cli::parse_gram_text(cli::gram_to_json(g), "dump");
    CHECK((back.array() == g.array()).all());
  }
}

TEST_CASE("digest") {
  CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("adv report") {
  const Run r = run_cli({"adv", "--function", kData + "/or2.json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == cli::kSchemaVersion);
  CHECK(j["command"] == "adv");
  CHECK(j["input_digest"].get<std::string>().size() == 64);
  CHECK(j["results"]["value"].get<double>() == doctest::Approx(1.41421).epsilon(1e-5));
  CHECK(j["pass"] == true);
  CHECK(j["diagnostics"]["solver"]["iterations"].get<int>() > 0);
  CHECK(j.contains("wall_time_s"));
}

TEST_CASE("simulate report") {
  const std::string csv = std::string(STATECONV_BINARY_DIR) + "/phases.csv";
  const Run r = run_cli({"simulate", "--function", kData + "/id1.json", "--eps", "0.1", "--phases-csv", csv});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& e : j["results"]["entries"]) CHECK(e["final_error"].get<double>() < 0.4);
  std::ifstream in(std::string(STATECONV_BINARY_DIR) + "/phases_0.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "phase,multiplicity");
}

TEST_CASE("reports are reproducible") {
  const auto strip = [](const std::string& s) {
    auto j = nlohmann::json::parse(s);
    j.erase("wall_time_s");
    return j.dump();
  };
  const Run a = run_cli({"props", "--trials", "2", "--seed", "5"});
  const Run b = run_cli({"props", "--trials", "2", "--seed", "5"});
  REQUIRE(a.code == 0);
  CHECK(strip(a.out) == strip(b.out));
  const Run c = run_cli({"certify-one-query", "--trials", "3", "--seed", "5"});
  const Run d = run_cli({"certify-one-query", "--trials", "3", "--seed", "6"});
  CHECK(strip(c.out) != strip(d.out));
}

TEST_CASE("out flag") {
  const std::string path = std::string(STATECONV_BINARY_DIR) + "/report.json";
  std::remove(path.c_str());
  const Run r = run_cli({"qdist", "--function", kData + "/id1.json", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["results"]["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("exit codes") {
  // input errors
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"adv"}).code == 2);
  CHECK(run_cli({"adv", "--function", kData + "/missing.json"}).code == 2);
  CHECK(run_cli({"adv", "--function", write_temp("broken.json", "{\"alphabet\": 2,")}).code == 2);
  CHECK(run_cli({"qdelta", "--function", kData + "/id1.json"}).code == 2);
  CHECK(run_cli({"qdelta", "--function", kData + "/id1.json", "--delta", "-1"}).code == 2);
  CHECK(run_cli({"simulate", "--function", kData + "/id1.json", "--eps", "2"}).code == 2);
  CHECK(run_cli({"qdist", "--function", kData + "/or2.json", "--rho", kData + "/j2.json"}).code == 2);
  CHECK(run_cli({"qdist", "--function", kData + "/id1.json", "--rho",
                 write_temp("notpsd.json", R"({"size":2,"entries":[[1,0],[2,0],[2,0],[1,0]]})")})
            .code == 2);
  CHECK(run_cli({"compose", "--function", kData + "/xor2.json", "--inner", kData + "/mixed.json"}).code == 2);
  // a check that cannot pass at the requested tolerance
  const Run strict = run_cli({"adv", "--function", kData + "/or2.json", "--tol", "1e-15"});
  CHECK(strict.code == 1);
  CHECK(nlohmann::json::parse(strict.out)["pass"] == false);
  // passes
  CHECK(run_cli({"qdelta", "--function", kData + "/id1.json", "--delta", "0.25", "--nc"}).code == 0);
  CHECK(run_cli({"compose", "--function", kData + "/xor2.json", "--inner", kData + "/and2.json"}).code == 0);
  CHECK(run_cli({"certify-fractional", "--trials", "1", "--lambda", "0.5"}).code == 0);
  CHECK(run_cli({"output-condition", "--trials", "3"}).code == 0);
  CHECK(run_cli({"--help"}).code == 0);
}

}
