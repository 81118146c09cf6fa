#include "ftl/store.hpp"

#include <cstring>
#include <fstream>

namespace ftl {

namespace {
constexpr uint32_t kMagic = 0x46544C42;  // "FTLB"
constexpr uint32_t kVersion = 1;
}  // namespace

void ByteWriter::u64(uint64_t x) {
  while (x >= 0x80) {
    buf_.push_back((uint8_t)(x | 0x80));
    x >>= 7;
  }
  buf_.push_back((uint8_t)x);
}

void ByteWriter::i64(long long x) {
  u64(((uint64_t)x << 1) ^ (uint64_t)(x >> 63));
}

void ByteWriter::rat(const Rat& r) {
  Rat c = r;
  c.canonicalize();
  const mpz_class num = c.get_num(), den = c.get_den();
  auto put_mpz = [&](const mpz_class& z) {
    int sign = mpz_sgn(z.get_mpz_t());
    u8((uint8_t)(sign + 1));
    if (sign == 0) return;
    size_t count = 0;
    std::vector<uint8_t> tmp((mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8);
    mpz_export(tmp.data(), &count, -1, 1, 0, 0, z.get_mpz_t());
    u64(count);
    for (size_t i = 0; i < count; ++i) buf_.push_back(tmp[i]);
  };
  put_mpz(num);
  put_mpz(den);
}

void ByteWriter::str(const std::string& s) {
  u64(s.size());
  buf_.insert(buf_.end(), s.begin(), s.end());
}

void ByteReader::fail(const std::string& what) const {
  throw ParseError("label store: " + what + " at offset " + std::to_string(pos_));
}

uint8_t ByteReader::u8() {
  if (pos_ >= size_) fail("truncated stream");
  return data_[pos_++];
}

uint64_t ByteReader::u64() {
  uint64_t x = 0;
  int shift = 0;
  for (;;) {
    uint8_t b = u8();
    x |= (uint64_t)(b & 0x7f) << shift;
    if (!(b & 0x80)) break;
    shift += 7;
    if (shift > 63) fail("varint overflow");
  }
  return x;
}

long long ByteReader::i64() {
  uint64_t z = u64();
  return (long long)((z >> 1) ^ (~(z & 1) + 1));
}

uint32_t ByteReader::u32() {
  uint64_t x = u64();
  if (x > 0xffffffffULL) fail("u32 overflow");
  return (uint32_t)x;
}

Rat ByteReader::rat() {
  auto get_mpz = [&]() {
    int sign = (int)u8() - 1;
    if (sign < -1 || sign > 1) fail("bad mpz sign");
    if (sign == 0) return mpz_class(0);
    uint64_t count = u64();
    if (pos_ + count > size_) fail("truncated mpz");
    mpz_class z;
    mpz_import(z.get_mpz_t(), count, -1, 1, 0, 0, data_ + pos_);
    pos_ += count;
    if (sign < 0) z = -z;
    return z;
  };
  mpz_class num = get_mpz();
  mpz_class den = get_mpz();
  if (den <= 0) fail("nonpositive denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string ByteReader::str() {
  uint64_t len = u64();
  if (pos_ + len > size_) fail("truncated string");
  std::string s((const char*)data_ + pos_, len);
  pos_ += len;
  return s;
}

void ByteReader::expect_done() const {
  if (pos_ != size_)
    throw ParseError("label store: trailing bytes at offset " + std::to_string(pos_));
}

namespace {

void put_rat_vec(ByteWriter& w, const std::vector<Rat>& v) {
  w.u64(v.size());
  for (const Rat& r : v) w.rat(r);
}

std::vector<Rat> get_rat_vec(ByteReader& r) {
  size_t n = r.u64();
  std::vector<Rat> v;
  v.reserve(n);
  for (size_t i = 0; i < n; ++i) v.push_back(r.rat());
  return v;
}

void put_int_vec(ByteWriter& w, const std::vector<int>& v) {
  w.u64(v.size());
  for (int x : v) w.i64(x);
}

std::vector<int> get_int_vec(ByteReader& r) {
  size_t n = r.u64();
  std::vector<int> v;
  v.reserve(n);
  for (size_t i = 0; i < n; ++i) v.push_back((int)r.i64());
  return v;
}

void put_vfp(ByteWriter& w, const VertexFingerprint& fp) {
  w.i64(fp.vertex);
  w.u64(fp.entries.size());
  for (const auto& e : fp.entries) {
    w.u64(e.cluster);
    put_int_vec(w, e.levels);
    w.i64(e.cluster_size);
    w.i64(e.start);
    w.i64(e.end);
    put_rat_vec(w, e.a_cluster);
    put_rat_vec(w, e.a_subtree);
  }
}

VertexFingerprint get_vfp(ByteReader& r) {
  VertexFingerprint fp;
  fp.vertex = (int)r.i64();
  size_t n = r.u64();
  for (size_t i = 0; i < n; ++i) {
    FingerprintClusterEntry e;
    e.cluster = r.u64();
    e.levels = get_int_vec(r);
    e.cluster_size = (int)r.i64();
    e.start = (int)r.i64();
    e.end = (int)r.i64();
    e.a_cluster = get_rat_vec(r);
    e.a_subtree = get_rat_vec(r);
    fp.entries.push_back(std::move(e));
  }
  return fp;
}

void put_efp(ByteWriter& w, const EdgeFingerprint& fp) {
  w.i64(fp.edge_id);
  w.i64(fp.u);
  w.i64(fp.v);
  w.i64(fp.length);
  put_vfp(w, fp.fu);
  put_vfp(w, fp.fv);
}

EdgeFingerprint get_efp(ByteReader& r) {
  EdgeFingerprint fp;
  fp.edge_id = (int)r.i64();
  fp.u = (int)r.i64();
  fp.v = (int)r.i64();
  fp.length = r.i64();
  fp.fu = get_vfp(r);
  fp.fv = get_vfp(r);
  return fp;
}

void put_vlabel(ByteWriter& w, const VLabel& vl) {
  w.i64(vl.vertex);
  w.u64(vl.scales.size());
  for (const auto& s : vl.scales) {
    put_vfp(w, s.self);
    w.u64(s.stored_edges.size());
    for (const auto& e : s.stored_edges) put_efp(w, e);
  }
}

VLabel get_vlabel(ByteReader& r) {
  VLabel vl;
  vl.vertex = (int)r.i64();
  size_t ns = r.u64();
  vl.scales.resize(ns);
  for (auto& s : vl.scales) {
    s.self = get_vfp(r);
    size_t ne = r.u64();
    for (size_t i = 0; i < ne; ++i) s.stored_edges.push_back(get_efp(r));
  }
  return vl;
}

void put_window(ByteWriter& w, const ELabelWindow& win) {
  w.i64(win.j);
  w.i64(win.pos);
  w.i64(win.pos_end);
  put_int_vec(w, win.stored_edges);
}

ELabelWindow get_window(ByteReader& r) {
  ELabelWindow win;
  win.j = (int)r.i64();
  win.pos = (int)r.i64();
  win.pos_end = (int)r.i64();
  win.stored_edges = get_int_vec(r);
  return win;
}

void put_elabel(ByteWriter& w, const ELabel& el) {
  w.i64(el.edge_id);
  w.boolean(el.trivial());
  if (el.trivial()) return;
  w.u64(el.scales.size());
  for (const auto& s : el.scales) {
    w.boolean(s.empty());
    if (s.empty()) continue;
    put_efp(w, s.self);
    w.u64(s.clusters.size());
    for (const auto& blk : s.clusters) {
      w.u64(blk.cluster);
      put_int_vec(w, blk.levels);
      w.i64(blk.cluster_size);
      w.i64(blk.fwd_pos);
      w.i64(blk.bwd_pos);
      w.u64(blk.fwd.size());
      for (const auto& win : blk.fwd) put_window(w, win);
      w.u64(blk.bwd.size());
      for (const auto& win : blk.bwd) put_window(w, win);
    }
    w.u64(s.edge_pool.size());
    for (const auto& [id, fp] : s.edge_pool) {
      w.i64(id);
      put_efp(w, fp);
    }
  }
  w.u64(el.endpoint_vlabels.size());
  for (const auto& [v, vl] : el.endpoint_vlabels) {
    w.i64(v);
    put_vlabel(w, vl);
  }
}

ELabel get_elabel(ByteReader& r) {
  ELabel el;
  el.edge_id = (int)r.i64();
  if (r.boolean()) return el;  // trivial: only the identifier
  size_t ns = r.u64();
  el.scales.resize(ns);
  for (auto& s : el.scales) {
    if (r.boolean()) continue;
    s.self = get_efp(r);
    size_t nc = r.u64();
    for (size_t c = 0; c < nc; ++c) {
      ELabelClusterBlock blk;
      blk.cluster = r.u64();
      blk.levels = get_int_vec(r);
      blk.cluster_size = (int)r.i64();
      blk.fwd_pos = (int)r.i64();
      blk.bwd_pos = (int)r.i64();
      size_t nf = r.u64();
      for (size_t i = 0; i < nf; ++i) blk.fwd.push_back(get_window(r));
      size_t nb = r.u64();
      for (size_t i = 0; i < nb; ++i) blk.bwd.push_back(get_window(r));
      s.clusters.push_back(std::move(blk));
    }
    size_t np = r.u64();
    for (size_t i = 0; i < np; ++i) {
      int id = (int)r.i64();
      s.edge_pool.emplace(id, get_efp(r));
    }
  }
  size_t nv = r.u64();
  for (size_t i = 0; i < nv; ++i) {
    int v = (int)r.i64();
    el.endpoint_vlabels.emplace(v, get_vlabel(r));
  }
  return el;
}

void put_scale_params(ByteWriter& w, const ScaleParams& sp) {
  w.i64(sp.i);
  w.i64(sp.h);
  w.i64(sp.h_cov);
  w.i64(sp.h_diam);
  w.i64(sp.h_ed);
  w.i64(sp.hs_ed);
  w.rat(sp.tau_hit);
  w.rat(sp.tau_heavy);
  w.rat(sp.phi);
}

ScaleParams get_scale_params(ByteReader& r) {
  ScaleParams sp;
  sp.i = (int)r.i64();
  sp.h = r.i64();
  sp.h_cov = r.i64();
  sp.h_diam = r.i64();
  sp.h_ed = r.i64();
  sp.hs_ed = r.i64();
  sp.tau_hit = r.rat();
  sp.tau_heavy = r.rat();
  sp.phi = r.rat();
  return sp;
}

}  // namespace

const EdgeMeta* LabelStore::edge_by_id(int id) const {
  for (const auto& e : edge_meta)
    if (e.id == id) return &e;
  return nullptr;
}

LabelStore store_from_scheme(const LabelScheme& scheme) {
  LabelStore st;
  st.n = scheme.g.n();
  st.m = scheme.g.m();
  st.length_bound = scheme.g.declared_length_bound();
  st.params = scheme.params;
  st.i_max = scheme.i_max;
  for (const auto& b : scheme.bundles) st.scale_params.push_back(b.params);
  for (const Edge& e : scheme.g.edges())
    st.edge_meta.push_back({e.id, e.u, e.v, e.length, e.capacity});
  st.vlabels = scheme.vlabels;
  st.elabels = scheme.elabels;
  return st;
}

std::vector<uint8_t> serialize_store(const LabelStore& st) {
  ByteWriter w;
  w.u64(kMagic);
  w.u64(kVersion);
  w.i64(st.n);
  w.i64(st.m);
  w.i64(st.length_bound);
  w.i64(st.params.s_nc);
  w.i64(st.params.s_ed);
  w.i64(st.params.d);
  w.i64(st.params.f);
  w.i64(st.params.k);
  w.rat(rat_upper_fixed(st.params.c_tau));
  w.rat(rat_upper_fixed(st.params.c_omega));
  w.i64(st.i_max);
  w.u64(st.scale_params.size());
  for (const auto& sp : st.scale_params) put_scale_params(w, sp);
  w.u64(st.edge_meta.size());
  for (const auto& e : st.edge_meta) {
    w.i64(e.id);
    w.i64(e.u);
    w.i64(e.v);
    w.i64(e.length);
    w.rat(e.capacity);
  }
  w.u64(st.vlabels.size());
  for (const auto& [v, vl] : st.vlabels) {
    ByteWriter inner;
    put_vlabel(inner, vl);
    w.i64(v);
    w.u64(inner.size());
    for (uint8_t b : inner.bytes()) w.u8(b);
  }
  w.u64(st.elabels.size());
  for (const auto& [id, el] : st.elabels) {
    ByteWriter inner;
    put_elabel(inner, el);
    w.i64(id);
    w.u64(inner.size());
    for (uint8_t b : inner.bytes()) w.u8(b);
  }
  return w.take();
}

LabelStore deserialize_store(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  if (r.u64() != kMagic) throw ParseError("label store: bad magic header");
  uint64_t version = r.u64();
  if (version != kVersion)
    throw ParseError("label store: unsupported version " + std::to_string(version));
  LabelStore st;
  st.n = (int)r.i64();
  st.m = (int)r.i64();
  st.length_bound = r.i64();
  st.params.s_nc = (int)r.i64();
  st.params.s_ed = r.i64();
  st.params.d = (int)r.i64();
  st.params.f = (int)r.i64();
  st.params.k = (int)r.i64();
  st.params.c_tau = rat_double(r.rat());
  st.params.c_omega = rat_double(r.rat());
  st.i_max = (int)r.i64();
  size_t ns = r.u64();
  for (size_t i = 0; i < ns; ++i) st.scale_params.push_back(get_scale_params(r));
  size_t ne = r.u64();
  for (size_t i = 0; i < ne; ++i) {
    EdgeMeta e;
    e.id = (int)r.i64();
    e.u = (int)r.i64();
    e.v = (int)r.i64();
    e.length = r.i64();
    e.capacity = r.rat();
    st.edge_meta.push_back(std::move(e));
  }
  size_t nv = r.u64();
  for (size_t i = 0; i < nv; ++i) {
    int v = (int)r.i64();
    size_t len = r.u64();
    (void)len;
    st.vlabels.emplace(v, get_vlabel(r));
  }
  size_t nel = r.u64();
  for (size_t i = 0; i < nel; ++i) {
    int id = (int)r.i64();
    size_t len = r.u64();
    (void)len;
    st.elabels.emplace(id, get_elabel(r));
  }
  r.expect_done();
  return st;
}

std::vector<uint8_t> serialize_vlabel(const VLabel& vl) {
  ByteWriter w;
  put_vlabel(w, vl);
  return w.take();
}

std::vector<uint8_t> serialize_elabel(const ELabel& el) {
  ByteWriter w;
  put_elabel(w, el);
  return w.take();
}

VLabel deserialize_vlabel(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  VLabel vl = get_vlabel(r);
  r.expect_done();
  return vl;
}

ELabel deserialize_elabel(const std::vector<uint8_t>& bytes) {
  ByteReader r(bytes);
  ELabel el = get_elabel(r);
  r.expect_done();
  return el;
}

long long expanded_elabel_size(const ELabel& el) {
  // template form: every stored edge carries its fingerprint and both
  // endpoints' full vertex labels inline, per window occurrence
  std::map<int, long long> vl_size;
  for (const auto& [v, vl] : el.endpoint_vlabels)
    vl_size[v] = (long long)serialize_vlabel(vl).size();
  long long total = 16;  // id + bookkeeping
  for (const auto& s : el.scales) {
    if (s.empty()) continue;
    ByteWriter w;
    put_efp(w, s.self);
    total += (long long)w.size();
    std::map<int, long long> fp_size;
    for (const auto& [id, fp] : s.edge_pool) {
      ByteWriter fw;
      put_efp(fw, fp);
      fp_size[id] = (long long)fw.size();
    }
    for (const auto& blk : s.clusters) {
      total += 32;
      for (const auto* side : {&blk.fwd, &blk.bwd})
        for (const auto& win : *side) {
          total += 12;
          for (int id : win.stored_edges) {
            total += fp_size.at(id);
            const EdgeFingerprint& fp = s.edge_pool.at(id);
            total += vl_size.at(fp.u) + vl_size.at(fp.v);
          }
        }
    }
  }
  return total;
}

LabelSizeReport measure_labels(const LabelScheme& scheme) {
  LabelSizeReport rep;
  for (const auto& [v, vl] : scheme.vlabels) {
    long long s = (long long)serialize_vlabel(vl).size();
    rep.total_vlabel_bytes += s;
    rep.max_vlabel_bytes = std::max(rep.max_vlabel_bytes, s);
  }
  for (const auto& [id, el] : scheme.elabels) {
    long long s = (long long)serialize_elabel(el).size();
    rep.total_elabel_bytes += s;
    rep.max_elabel_bytes = std::max(rep.max_elabel_bytes, s);
    long long x = el.trivial() ? s : expanded_elabel_size(el);
    rep.total_expanded_elabel += x;
    rep.max_expanded_elabel = std::max(rep.max_expanded_elabel, x);
  }
  rep.nontrivial_elabels = scheme.nontrivial_elabels;
  rep.cluster_size_bound = scheme.cluster_size_bound;
  return rep;
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for writing: " + path);
  f.write((const char*)bytes.data(), (std::streamsize)bytes.size());
  if (!f) throw Error("write failed: " + path);
}

std::vector<uint8_t> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open for reading: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace ftl
