// SPDX-License-Identifier: Apache-2.0
/*!
  \file
  \brief End-to-end tests of the command-line tool: exit codes, output
         values, determinism, and the stored-table reproduction ids.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#ifndef GG1_CLI_PATH
#error "tests must be compiled with -DGG1_CLI_PATH=\"...\""
#endif
#ifndef GG1_MODELS_DIR
#error "tests must be compiled with -DGG1_MODELS_DIR=\"...\""
#endif

namespace {

struct RunResult {
  int exitCode = -1;
  std::string out;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(GG1_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string model(const char* name) {
  return std::string(GG1_MODELS_DIR "/") + name + ".model";
}

}  // namespace

TEST_CASE("reproduce: every stored table id regenerates and passes") {
  const char* ids[] = {"gated-tail", "gated-mean", "gated-timing",
                       "e2d1-moments", "md1-tails", "ud1",
                       "uu1", "mixture-roots"};
  for (const char* id : ids) {
    const RunResult r = run(std::string("reproduce ") + id);
    CAPTURE(id);
    CAPTURE(r.out);
    CHECK(r.exitCode == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
}

TEST_CASE("exit codes: bad input is 2") {
  CHECK(run("reproduce no-such-table").exitCode == 2);
  CHECK(run("tail --model " + model("md1")).exitCode == 2);  // missing --t
  CHECK(run("tail --model /nonexistent.model --t 1").exitCode == 2);
  CHECK(run("bogus-subcommand").exitCode == 2);
  CHECK(run("oracle takacs --lambda 1.2 --t 1").exitCode == 2);

  // An unstable model file is rejected at load time.
  const std::string path = "/tmp/gg1_unstable.model";
  std::ofstream(path) << "interarrival = deterministic 1\n"
                         "service = uniform 0 6\n";
  CHECK(run("tail --model " + path + " --t 1").exitCode == 2);
  std::remove(path.c_str());
}

TEST_CASE("tail: value output and determinism") {
  const RunResult r = run("tail --model " + model("md1") + " --t 2 --terms 1000");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("0.011646734") != std::string::npos);

  const RunResult again = run("tail --model " + model("md1") + " --t 2 --terms 1000");
  CHECK(again.out == r.out);
}

TEST_CASE("roots: frozen leading values for the uniform/uniform model") {
  const RunResult r = run("roots --model " + model("uu1") + " --count 4");
  CHECK(r.exitCode == 0);
  for (const char* needle :
       {"-1.112636163", "-2.362945136", "4.244639381", "-2.894232391",
        "7.457728792", "-3.214439900", "10.723473915"}) {
    CAPTURE(needle);
    CHECK(r.out.find(needle) != std::string::npos);
  }
}

TEST_CASE("roots: mixture model lists both branches and passes --eps") {
  const RunResult r = run("roots --model " + model("mix") + " --count 12");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("branch") != std::string::npos);
}

TEST_CASE("idle and moments subcommands") {
  const RunResult idle = run("idle --model " + model("ud1") + " --terms 400");
  CHECK(idle.exitCode == 0);
  CHECK(idle.out.find("0.81506988") != std::string::npos);

  const RunResult mom = run("moments --model " + model("ud1") +
                            " --terms 5 --telescope 400 --method cumulants");
  CHECK(mom.exitCode == 0);
  CHECK(mom.out.find("0.1095808") != std::string::npos);
}

TEST_CASE("gated and oracle subcommands") {
  const RunResult g = run("gated --lambda 3 --mu 4 --t 2 --terms 60 --factors 2000");
  CHECK(g.exitCode == 0);
  CHECK(g.out.find("0.074312") != std::string::npos);

  const RunResult gm = run("gated --lambda 3 --mu 4 --mean-terms 1000 "
                           "--mean-method viaR");
  CHECK(gm.exitCode == 0);
  CHECK(gm.out.find("0.5362028635") != std::string::npos);

  const RunResult tk = run("oracle takacs --lambda 0.333333333333333 --t 2");
  CHECK(tk.exitCode == 0);
  CHECK(tk.out.find("0.0116467") != std::string::npos);

  const RunResult mk = run("oracle markov --lambda 3 --mu 4 --t 2");
  CHECK(mk.exitCode == 0);
  CHECK(mk.out.find("0.0743") != std::string::npos);

  const RunResult sim = run("oracle simulate --model " + model("ud1") +
                            " --n 100000 --seed 11 --t 1");
  CHECK(sim.exitCode == 0);
  const RunResult sim2 = run("oracle simulate --model " + model("ud1") +
                             " --n 100000 --seed 11 --t 1");
  CHECK(sim2.out == sim.out);
}

TEST_CASE("output redirection and JSON format") {
  const std::string path = "/tmp/gg1_cli_out.json";
  const RunResult r = run("tail --model " + model("md1") +
                          " --t 2 --terms 1000 --format json --out " + path);
  CHECK(r.exitCode == 0);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(!text.empty());
  CHECK((text.front() == '{' || text.front() == '['));
  CHECK(text.find("0.011646") != std::string::npos);
  std::remove(path.c_str());
}
