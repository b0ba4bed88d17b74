#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  const std::string cmd = std::string(IRSPEC_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("census command") {
  const Run swf = run("census --m 3 --n 1");
  REQUIRE(swf.code == 0);
  const auto j = nlohmann::json::parse(swf.out);
  CHECK(j["constants"] == 6);
  CHECK(j["dictator_family"] == 6);
  CHECK(j["other"] == 0);
  const Run scf = run("census --m 3 --n 1 --partition '1|2,3'");
  REQUIRE(scf.code == 0);
  CHECK(nlohmann::json::parse(scf.out)["zero_locus_size"] == 6);
  CHECK(run("census --m 4 --n 1").code == 3);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("spectra --m 2").code == 2);
  CHECK(run("census --m 3 --partition '1|1,2'").code == 2);
  CHECK(run("analyze --m 3 --rule dictator:i=4").code == 2);
  CHECK(run("analyze --m 3 --rule nosuchrule").code == 2);
  CHECK(run("analyze --m 3 --input /nonexistent.json").code == 2);
  CHECK(run("moments --m 3").code == 2);
  CHECK(run("moments --m 4 --sigma-hyper abc").code == 2);
}

TEST_CASE("analyze output") {
  const Run r = run("analyze --m 3 --n 2 --partition '1|2,3' --rule plurality");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["ir"]["profile_distance_ir"] == "1/9");
  CHECK(j["manipulation"]["total"] == "2/27");
  CHECK(j["manipulation"]["c"] == "3/2");
  CHECK(j["manipulation"]["c_times_M_ge_IR"] == true);
  CHECK(j["robustness"]["kernel_bound_holds"] == true);

  const Run d = run("analyze --m 3 --n 2 --rule corrupted-dictator:i=2,sigma=231,k=1 --seed 4");
  REQUIRE(d.code == 0);
  const auto jd = nlohmann::json::parse(d.out);
  CHECK(jd["robustness"]["rounded"]["voter"] == 2);
  CHECK(jd["robustness"]["rounded"]["sigma"] == "231");
}

TEST_CASE("results do not depend on the thread count") {
  const std::string args = "analyze --m 3 --n 2 --rule random --orders random --seed 17";
  const Run a = run(args + " --threads 1");
  const Run b = run(args + " --threads 4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run("census --m 3 --n 1 --threads 1");
  const Run d = run("census --m 3 --n 1 --threads 3");
  CHECK(c.out == d.out);
}

TEST_CASE("report file and summary") {
  const auto path = std::filesystem::temp_directory_path() / "irspec_cli_test.json";
  const Run r = run("spectra --m 3 --n 1 --out " + path.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("in bracket: yes") != std::string::npos);
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["hat_l1"]["clusters"].size() == 3);
  std::filesystem::remove(path);
}
