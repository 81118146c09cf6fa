// Command-line frontend: instance generation, label building, label-only
// queries, the compiled fast-query path, the validation suite, and benchmarks.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ftl/decoder.hpp"
#include "ftl/harness.hpp"
#include "ftl/store.hpp"
#include "ftl/tz.hpp"

namespace {

using namespace ftl;

constexpr uint64_t kOracleMagic = 0x46544C4FULL;  // "FTLO"

void write_oracle_file(const std::string& path, const LabelStore& store,
                       const TZStructure& tz) {
  ByteWriter w;
  w.u64(kOracleMagic);
  w.u64(1);
  std::vector<uint8_t> sb = serialize_store(store);
  std::vector<uint8_t> tb = serialize_tz(tz);
  w.u64(sb.size());
  for (uint8_t b : sb) w.u8(b);
  w.u64(tb.size());
  for (uint8_t b : tb) w.u8(b);
  write_file(path, w.bytes());
}

std::pair<LabelStore, TZStructure> read_oracle_file(const std::string& path) {
  std::vector<uint8_t> bytes = read_file(path);
  ByteReader r(bytes);
  if (r.u64() != kOracleMagic) throw ParseError("oracle file: bad magic");
  if (r.u64() != 1) throw ParseError("oracle file: unsupported version");
  size_t sl = r.u64();
  std::vector<uint8_t> sb(bytes.begin() + r.offset(), bytes.begin() + r.offset() + sl);
  ByteReader skip1(sb);
  LabelStore store = deserialize_store(sb);
  ByteReader r2(bytes.data() + (r.offset() + sl), bytes.size() - r.offset() - sl);
  size_t tl = r2.u64();
  std::vector<uint8_t> tb(bytes.data() + (r.offset() + sl) + r2.offset(),
                          bytes.data() + (r.offset() + sl) + r2.offset() + tl);
  TZStructure tz = deserialize_tz(tb);
  return {std::move(store), std::move(tz)};
}

Graph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open graph file: " + path);
  return read_graph(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fault-tolerant approximate distance labels"};
  app.require_subcommand(1);
  uint64_t seed = 1;
  app.add_option("--seed", seed, "global random seed");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded graph instance");
  int n_min = 2, n_max = 12, m_max = 20;
  long long len_max = 8;
  std::string out_path = "graph.txt";
  gen->add_option("--n-min", n_min);
  gen->add_option("--n-max", n_max);
  gen->add_option("--m-max", m_max);
  gen->add_option("--len-max", len_max);
  gen->add_option("-o,--out", out_path, "output graph path");

  // build
  auto* build = app.add_subcommand("build", "build labels and the TZ extension");
  std::string graph_path, store_path = "labels.ftlo";
  LabelParams params;
  build->add_option("-g,--graph", graph_path, "graph file")->required();
  build->add_option("-o,--out", store_path, "output store path");
  build->add_option("--snc", params.s_nc, "cover length slack");
  build->add_option("--sed", params.s_ed, "expander length slack");
  build->add_option("-d,--depth", params.d, "hierarchy depth");
  build->add_option("-f,--failures", params.f, "failure budget");
  build->add_option("-k,--tz", params.k, "Thorup-Zwick parameter");

  // query
  auto* query = app.add_subcommand("query", "label-only distance query");
  std::string q_store;
  int qp = 0, qq = 0;
  std::vector<int> q_failed;
  query->add_option("-s,--store", q_store, "store file")->required();
  query->add_option("-p", qp)->required();
  query->add_option("-q", qq)->required();
  query->add_option("-F,--failed", q_failed, "failed edge ids");

  // compile
  auto* compile = app.add_subcommand("compile", "compile a fast-query oracle for F");
  std::string c_store, c_out = "compiled.ftlc";
  std::vector<int> c_failed;
  compile->add_option("-s,--store", c_store, "store file")->required();
  compile->add_option("--failures", c_failed, "failed edge ids");
  compile->add_option("-o,--out", c_out, "output blob path");

  // fastquery
  auto* fastq = app.add_subcommand("fastquery", "query against a compiled oracle");
  std::string f_store, f_blob;
  int fp = 0, fq = 0;
  fastq->add_option("-s,--store", f_store, "store file")->required();
  fastq->add_option("-b,--blob", f_blob, "compiled blob")->required();
  fastq->add_option("-p", fp)->required();
  fastq->add_option("-q", fq)->required();

  // validate
  auto* validate = app.add_subcommand("validate", "run the validation suite");
  int v_graphs = 6;
  int v_euler = 120;
  int v_tz_graphs = 6;
  int v_nmax = 9, v_mmax = 14;
  bool v_full = false, v_progress = false;
  std::string v_graph_path;
  validate->add_option("--graphs", v_graphs, "sweep instance count");
  validate->add_option("--euler", v_euler, "euler recovery instances");
  validate->add_option("--tz-graphs", v_tz_graphs);
  validate->add_option("--n-max", v_nmax);
  validate->add_option("--m-max", v_mmax);
  validate->add_flag("--full", v_full, "full acceptance profile (slow)");
  validate->add_flag("--progress", v_progress);
  validate->add_option("-g,--graph", v_graph_path,
                       "also dump the hierarchy of this graph per scale");

  // bench
  auto* bench = app.add_subcommand("bench", "label size and query time tables");
  int b_graphs = 3;
  bench->add_option("--graphs", b_graphs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      Graph g = generate_graph(seed, n_min, n_max, m_max, len_max);
      std::ofstream f(out_path);
      if (!f) throw UsageError("cannot open output: " + out_path);
      write_graph(f, g);
      std::cout << "wrote " << out_path << " (n=" << g.n() << ", m=" << g.m()
                << ")\n";
      return 0;
    }
    if (build->parsed()) {
      Graph g = load_graph(graph_path);
      LabelScheme scheme = build_labels(g, params);
      LabelStore store = store_from_scheme(scheme);
      TZStructure tz = tz_build(g, params.k);
      write_oracle_file(store_path, store, tz);
      LabelSizeReport sz = measure_labels(scheme);
      std::cout << "wrote " << store_path << "\n"
                << "scales: " << scheme.i_max + 1
                << ", non-trivial edge labels: " << scheme.nontrivial_elabels
                << "\nmax vertex label bytes: " << sz.max_vlabel_bytes
                << ", max edge label bytes (expanded): " << sz.max_expanded_elabel
                << "\n";
      return 0;
    }
    if (query->parsed()) {
      auto [store, tz] = read_oracle_file(q_store);
      QueryResult r = decode_query(store, qp, qq, q_failed);
      if (r.unreachable) {
        std::cout << "UNREACHABLE\n";
      } else {
        std::cout << r.estimate << " (true distance within [estimate/"
                  << r.stretch << ", estimate])\n";
      }
      return 0;
    }
    if (compile->parsed()) {
      auto [store, tz] = read_oracle_file(c_store);
      CompiledOracle co = compile_oracle(store, tz, c_failed);
      write_file(c_out, serialize_compiled(co));
      std::cout << "wrote " << c_out << " (" << co.s_vertices.size()
                << " endpoints, " << co.table.size() << " table entries)\n";
      return 0;
    }
    if (fastq->parsed()) {
      auto [store, tz] = read_oracle_file(f_store);
      CompiledOracle co = deserialize_compiled(read_file(f_blob));
      FastQueryResult r = fast_query(co, tz.labels.at(fp), tz.labels.at(fq));
      if (r.unreachable) std::cout << "UNREACHABLE\n";
      else std::cout << r.estimate << "\n";
      return 0;
    }
    if (validate->parsed()) {
      SuiteConfig cfg;
      cfg.seed = seed;
      cfg.profile.seed = seed;
      if (v_full) {
        cfg.sweep_graphs = 200;
        cfg.euler_instances = 1000;
        cfg.tz_graphs = 24;
        cfg.tz_n_max = 50;
      } else {
        cfg.sweep_graphs = v_graphs;
        cfg.euler_instances = v_euler;
        cfg.tz_graphs = v_tz_graphs;
        cfg.tz_n_max = 20;
        cfg.profile.n_max = v_nmax;
        cfg.profile.m_max = v_mmax;
        cfg.pack_samples = 10;
        cfg.determinism_graphs = 1;
      }
      cfg.progress = v_progress;
      if (!v_graph_path.empty()) {
        Graph g = load_graph(v_graph_path);
        for (int i = 0; i < scale_count(g); ++i) {
          ScaleBundle b = build_scale_structures(g, i, cfg.profile.labels);
          std::cout << "scale " << i << " hierarchy:\n"
                    << hierarchy_to_json(b.hier) << "\n";
        }
      }
      SuiteReport rep = validate_suite(cfg);
      std::cout << rep.to_json() << "\n";
      return rep.pass ? 0 : 1;
    }
    if (bench->parsed()) {
      SuiteConfig cfg;
      cfg.seed = seed;
      cfg.profile.seed = seed;
      cfg.sweep_graphs = b_graphs;
      std::vector<BenchRow> rows = run_bench(cfg);
      std::cout << "seed              n   m  vmax_B  emax_B  store_B  build_s  "
                   "query_us  fastq_us\n";
      for (const auto& r : rows) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "%-16llu %3d %3d %7lld %7lld %8lld %8.3f %9.2f %9.2f",
                      (unsigned long long)r.seed, r.n, r.m, r.vlabel_bytes_max,
                      r.elabel_bytes_max, r.store_bytes, r.build_seconds,
                      r.query_micros_avg, r.fastquery_micros_avg);
        std::cout << line << "\n";
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
