// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "fixtures/reference_tables.hpp"
#include "pdq/pdq.hpp"
#include "support/testing.hpp"

#ifndef PDQ_CLI_PATH
#error "PDQ_CLI_PATH must name the pdq executable"
#endif

using namespace pdq;
namespace fs = std::filesystem;
namespace ts = testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::string failed;

  void require(bool ok, const std::string& what)
  {
    if (!ok) {
      failed += (failed.empty() ? "failed: " : ", ") + what;
      pass = false;
    }
  }
};

int failures = 0;

void criterion(int id, const std::function<void(Outcome&)>& body)
{
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << std::fixed;
  std::cout.precision(2);
  std::cout << secs << " s) " << (o.failed.empty() ? "" : o.failed + " | ") << o.detail.str() << std::endl;
  failures += !o.pass;
}

double seconds_since(std::chrono::steady_clock::time_point t)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int run_cli(const std::string& args, const fs::path& errFile)
{
  const std::string cmd = std::string("\"") + PDQ_CLI_PATH + "\" " + args + " > /dev/null 2> \"" + errFile.string() + "\"";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::set<PairEdge> pair_set(const std::vector<std::pair<int, int>>& pairs) { return ts::edge_set(pairs); }

std::set<PairEdge> union_of(int n, std::initializer_list<std::pair<char, int>> families)
{
  std::set<PairEdge> out;
  for (auto [k, i] : families)
    for (const auto& e : pair_family(n, k, i).edges) out.insert(e);
  return out;
}

std::set<PairEdge> group_edges(const RTFactorization& f, int i)
{
  std::set<PairEdge> out;
  for (int j = 1; j <= 3; ++j) {
    const auto l = f.kind() == 'R' ? FactorLabel::r(i, j) : FactorLabel::t(i, j);
    for (const auto& e : f.at(l).edges()) out.insert(e);
  }
  return out;
}

bool visible_cells_match(const LabelSquare& h, const std::vector<std::string>& cols,
                         const std::vector<std::vector<std::string>>& rows, std::size_t& checked)
{
  bool ok = true;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] == "..." || rows[r][c].empty()) continue;
      ok &= h.at(r, FactorLabel::parse(cols[c])).to_string() == rows[r][c];
      ++checked;
    }
  return ok;
}

}  // namespace

int main()
{
  const fs::path work = fs::temp_directory_path() / "pdq_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  criterion(1, [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = run_cli("latin --n 7 --out \"" + (work / "m7.csv").string() + "\"", work / "c1.err");
    const double secs = seconds_since(t0);
    o.require(rc == 0, "latin exit status " + std::to_string(rc));
    const auto g = load_grid_csv(work / "m7.csv");
    std::size_t mismatches = g.rows() == 14 && g.cols() == 14 ? 0 : 196;
    if (mismatches == 0)
      for (std::size_t i = 0; i < 14; ++i)
        for (std::size_t j = 0; j < 14; ++j) mismatches += static_cast<int>(g(i, j)) != ref::kM7[i][j];
    o.require(mismatches == 0, std::to_string(mismatches) + " cells differ");
    o.require(secs < 1.0, "runtime " + std::to_string(secs) + " s");
    o.detail << "M_7 from the CLI equals the 14x14 reference cell for cell";
  });

  criterion(2, [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {5, 7, 11, 13, 17, 19, 23, 25}) o.require(!has_intercalate(build_M(n)), "M_" + std::to_string(n));
    o.require(seconds_since(t0) < 10.0, "runtime");
    o.detail << "M_n intercalate-free for n in {5,7,11,13,17,19,23,25}";
  });

  criterion(3, [&](Outcome& o) {
    std::size_t matched = 0;
    for (const auto& [name, pairs] : ref::kFamilies7) {
      const bool ok = ts::edge_set(pair_family(7, name[0], std::stoi(name.substr(1))).edges) == pair_set(pairs);
      o.require(ok, name);
      matched += ok;
    }
    o.require(matched == 20, "expected 20 families");
    o.detail << matched << "/20 families equal as edge sets";
  });

  criterion(4, [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {7, 11, 13, 17, 19, 25, 35}) {
      const auto r = build_R(n);
      const auto t = build_T(n);
      const auto tag = std::to_string(n);
      o.require(verify_one_factorization(r.as_one_factorization()).passed(), "R n=" + tag);
      o.require(verify_one_factorization(t.as_one_factorization()).passed(), "T n=" + tag);
      for (int i = 1; i <= (n - 1) / 2; ++i) {
        o.require(group_edges(r, i) == union_of(n, {{'A', i}, {'B', i}, {'C', i - 1}}), "R union n=" + tag);
        o.require(group_edges(t, i) == union_of(n, {{'A', i}, {'B', i}, {'D', i - 1}}), "T union n=" + tag);
      }
      if (n % 6 == 5)
        for (int i = (n + 1) / 2; i <= (2 * n - 1) / 3; ++i)
          for (int j = 1; j <= 3; ++j) {
            const int c = 3 * i - n - 3 + j;
            o.require(ts::edge_set(r.at(FactorLabel::r(i, j)).edges()) == ts::edge_set(pair_family(n, 'C', c).edges),
                      "R tail n=" + tag);
            o.require(ts::edge_set(t.at(FactorLabel::t(i, j)).edges()) == ts::edge_set(pair_family(n, 'D', c).edges),
                      "T tail n=" + tag);
          }
    }
    o.require(seconds_since(t0) < 5.0, "runtime");
    o.detail << "R, T valid; group unions and tail assignments exact for n in {7,11,13,17,19,25,35}";
  });

  criterion(5, [&](Outcome& o) {
    const auto r = build_R(11);
    const auto t = build_T(11);
    for (const auto& [alias, target] : ref::kTailAliases11)
      o.require(ts::edge_set(r.at(ts::label(alias)).edges()) == ts::edge_set(r.at(ts::label(target)).edges()) &&
                    canonical_label(11, ts::label(alias)) == ts::label(target),
                alias);
    std::vector<FactorLabel> cols;
    for (const auto& c : ref::kMSquare11Columns) cols.push_back(ts::label(c));
    std::vector<FactorLabel> entries;
    for (const auto& row : ref::kMSquare11Rows)
      for (const auto& e : row) entries.push_back(ts::label(e));
    o.require(build_label_square_M(11) == LabelSquare(cols, 7, entries), "M square");

    std::map<std::string, std::set<PairEdge>> printed;
    for (const auto& [name, pairs] : ref::kFactors11) printed[name] = pair_set(pairs);
    std::vector<OneFactor> rSide;
    for (const auto& [name, edges] : printed) {
      o.require(OneFactor(22, {edges.begin(), edges.end()}).is_perfect_matching(), name + " perfect matching");
      if (name[0] == 'R') rSide.emplace_back(22, std::vector<PairEdge>(edges.begin(), edges.end()));
    }
    for (int c = 5; c <= 10; ++c) rSide.push_back(pair_family(11, 'C', c).as_factor());
    o.require(verify_one_factorization(OneFactorization(22, rSide)).passed(), "printed R factorization");
    for (int i = 1; i <= 5; ++i) {
      std::set<PairEdge> got;
      for (int j = 1; j <= 3; ++j) {
        const auto& f = printed.at("R" + std::to_string(i) + "." + std::to_string(j));
        got.insert(f.begin(), f.end());
      }
      o.require(got == union_of(11, {{'A', i}, {'B', i}, {'C', i - 1}}), "printed R union " + std::to_string(i));
    }
    for (int i = 1; i <= 2; ++i) {
      std::set<PairEdge> got;
      for (int j = 1; j <= 3; ++j) {
        const auto& f = printed.at("T" + std::to_string(i) + "." + std::to_string(j));
        got.insert(f.begin(), f.end());
      }
      o.require(got == union_of(11, {{'A', i}, {'B', i}, {'D', i - 1}}), "printed T union " + std::to_string(i));
    }
    std::size_t same = 0;
    for (const auto& [name, edges] : printed) {
      const auto l = ts::label(name);
      same += ts::edge_set((l.kind == FactorLabel::Kind::R ? r : t).at(l).edges()) == edges;
    }
    o.require(same == printed.size(), "interior split differs from the fixture");
    o.detail << "tails, M square, printed factors valid; " << same << "/" << printed.size()
             << " interior factors equal the fixture";
  });

  criterion(6, [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int n : {7, 11, 13, 19}) {
      const auto h = build_H(n);
      o.require(h.rows() == static_cast<std::size_t>(2 * n - 1) && h.is_latin_over(t_side_labels(n)),
                "H Latin n=" + std::to_string(n));
    }
    std::size_t checked37 = 0;
    o.require(visible_cells_match(build_H(19), ref::kH37FirstSixColumns, ref::kH37FirstSixRows, checked37),
              "n=19 printed rows");
    std::size_t checked21 = 0;
    o.require(visible_cells_match(build_H(11), ref::kH21Columns, ref::kH21Rows, checked21), "n=11 printed table");
    std::size_t checked21first = 0;
    o.require(visible_cells_match(build_H(11), ref::kH21FirstSixColumns, ref::kH21FirstSixRows, checked21first),
              "n=11 first six rows");
    // The printed 21x21 table with its elided middle is checked cell for cell
    // against a square that passes the Latin validity suite.
    o.require(verify_latin(build_H(11).to_index_grid(t_side_labels(11))).passed(), "n=11 validity suite");
    o.require(seconds_since(t0) < 2.0, "runtime");
    o.detail << "H Latin for n in {7,11,13,19}; " << checked37 << " printed n=19 cells and " << checked21 + checked21first
             << " printed n=11 cells match";
  });

  criterion(7, [&](Outcome& o) {
    const auto f = ts::round_robin(4);
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = db_construct({QuadSystem(4, {Quadruple(0, 1, 2, 3)})}, f, f, LatinGrid(1, 3, 3, {0, 1, 2}));
    const auto cert = verify_sqs(out.systems()[0]);
    const double secs = seconds_since(t0);
    o.require(out.systems()[0].size() == 14, "block count");
    o.require(cert.passed(), "verify_sqs");
    std::uint64_t triples = 0;
    for (const auto& [k, v] : cert.counts())
      if (k == "triples") triples = v;
    o.detail << "SQS(8) with " << out.systems()[0].size() << " blocks, " << triples << " triples checked in "
             << secs * 1e3 << " ms (setup included)";
  });

  criterion(8, [&](Outcome& o) {
    const auto file = work / "sqs14.sqs";
    o.require(run_cli("search --v 14 --out \"" + file.string() + "\"", work / "c8.err") == 0, "search");
    const auto base = load_system(file);
    o.require(verify_sqs(base).passed(), "base");
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = dls_construct(base, build_M(7));
    o.require(out.systems.size() == 14, "system count");
    for (const auto& s : out.systems.systems()) o.require(s.size() == 819 && verify_sqs(s).passed(), "system");
    o.require(verify_pdq(out.systems).passed(), "pairwise disjoint");
    const auto c13 = verify_lemma_conf13(out);
    o.require(c13.passed(), "(3,1)/(1,3) census");
    const auto c22 = config22_census(out);
    o.require(c22.passed(), "(2,2) census");
    std::uint64_t conf13 = 0, conf22 = 0;
    for (const auto& [k, v] : c13.counts())
      if (k == "enumerated") conf13 = v;
    for (const auto& [k, v] : c22.counts())
      if (k == "conf22_blocks") conf22 = v;
    o.require(conf13 == 10192, "conf13 count " + std::to_string(conf13));
    o.require(conf22 == 1274, "conf22 count " + std::to_string(conf22));
    o.require(seconds_since(t0) < 30.0, "runtime");
    o.detail << "14 SQS(28) x 819 blocks, disjoint; conf13 " << conf13 << ", conf22 " << conf22;
  });

  criterion(9, [&](Outcome& o) {
    const auto base = work / "sqs14.sqs";
    const auto dir = work / "construct";
    const auto t0 = std::chrono::steady_clock::now();
    const int rc = run_cli("construct --n 7 --base \"" + base.string() + "\" --outdir \"" + dir.string() + "\"",
                           work / "c9.err");
    const double secs = seconds_since(t0);
    o.require(rc == 0, "construct exit status " + std::to_string(rc));
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().extension() == ".sqs") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    PdqCollection all(28, {});
    for (const auto& f : files) all.append(load_system(f));
    const std::size_t k = all.size() >= 14 ? all.size() - 14 : 0;
    const auto cert = verify_pdq(all);
    o.require(cert.passed(), "verify_pdq on reloaded outputs");
    o.require(k >= 1 && k <= 7, "k = " + std::to_string(k));
    const auto master = Json::parse(read_file(dir / "certificate.json"));
    const std::string bound = "D(28) >= " + std::to_string(14 + k) + " (= 14 + " + std::to_string(k) + ")";
    bool noted = false;
    for (const auto& n : master.value("notes", Json::array())) noted |= n.get<std::string>() == bound;
    o.require(noted, "master certificate bound note");
    o.require(master["verdict"] == "PASS", "master verdict");
    o.require(secs < 120.0, "runtime " + std::to_string(secs) + " s");
    o.detail << all.size() << " disjoint SQS(28) (k = " << k << " witnesses), " << all.size() * 819
             << " blocks, zero collisions; certificate: " << bound;
    if (k < 7) o.detail << "; the witness search found " << k << " disjoint SQS(14), below the cap of 7";
  });

  criterion(10, [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(99);
    const auto& dls = ts::dls_output(7);
    const auto r7 = build_R(7).as_one_factorization();
    const auto m7 = build_M(7);
    const std::vector<std::pair<std::string, std::function<ts::Trial()>>> suites{
        {"sqs", [&] { return ts::sqs_fault(ts::base_sqs(14), rng); }},
        {"pdq", [&] { return ts::pdq_fault(dls.systems, rng); }},
        {"onefact", [&] { return ts::onefact_fault(r7, rng); }},
        {"latin", [&] { return ts::latin_fault(m7, rng); }},
        {"conf13", [&] { return ts::conf13_fault(dls, rng); }},
        {"conf22", [&] { return ts::conf22_fault(dls, 7, rng); }},
    };
    constexpr int kTrials = 100;
    for (const auto& [name, trial] : suites) {
      int good = 0;
      for (int k = 0; k < kTrials; ++k) {
        const auto t = trial();
        good += t.detected && t.counterexampleValid;
      }
      o.require(good == kTrials, name + " " + std::to_string(good) + "/" + std::to_string(kTrials));
      o.detail << name << " " << good << "/" << kTrials << " ";
    }
    o.require(seconds_since(t0) < 30.0, "runtime");
  });

  criterion(11, [&](Outcome& o) {
    bool pipelineMessage = false;
    try {
      theorem1_pipeline(7, ts::base_sqs(14), {}, 8);
    } catch (const std::invalid_argument& e) {
      pipelineMessage = std::string(e.what()).find("k exceeds 2n-7") != std::string::npos;
    }
    o.require(pipelineMessage, "pipeline k = 8");
    const int rc = run_cli("construct --n 7 --k 8 --base \"" + (work / "sqs14.sqs").string() + "\" --outdir \"" +
                               (work / "k8").string() + "\"",
                           work / "c11.err");
    o.require(rc == 2 && read_file(work / "c11.err").find("k exceeds 2n-7") != std::string::npos, "CLI --k 8");
    PdqCollection many(28, {});
    for (std::size_t k = 0; k < 26; ++k) many.append(ts::dls_output(7).systems.systems()[k % 14]);
    const auto manyCert = verify_pdq(many);
    const auto* bound = manyCert.find("system_count_bound");
    o.require(bound && !bound->pass && bound->message.find("|systems| > v-3") != std::string::npos, "26 systems");
    o.detail << "k > 2n-7 rejected by library and CLI (exit 2); 26 systems of order 28 fail with \"|systems| > v-3\"";
  });

  fs::remove_all(work);
  return failures == 0 ? 0 : 1;
}
