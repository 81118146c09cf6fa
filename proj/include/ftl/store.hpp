#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftl/labels.hpp"

namespace ftl {

// canonical little-endian varint byte encoding; deterministic across runs
class ByteWriter {
 public:
  void u8(uint8_t x) { buf_.push_back(x); }
  void u64(uint64_t x);
  void i64(long long x);  // zigzag
  void u32(uint32_t x) { u64(x); }
  void boolean(bool b) { u8(b ? 1 : 0); }
  void rat(const Rat& r);
  void str(const std::string& s);
  const std::vector<uint8_t>& bytes() const { return buf_; }
  std::vector<uint8_t> take() { return std::move(buf_); }
  size_t size() const { return buf_.size(); }

 private:
  std::vector<uint8_t> buf_;
};

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::vector<uint8_t>& b) : data_(b.data()), size_(b.size()) {}
  uint8_t u8();
  uint64_t u64();
  long long i64();
  uint32_t u32();
  bool boolean() { return u8() != 0; }
  Rat rat();
  std::string str();
  size_t offset() const { return pos_; }
  bool done() const { return pos_ == size_; }
  void expect_done() const;

 private:
  [[noreturn]] void fail(const std::string& what) const;
  const uint8_t* data_;
  size_t size_;
  size_t pos_ = 0;
};

struct EdgeMeta {
  int id, u, v;
  Len length;
  Rat capacity;
};

// what the decoder consumes: global and per-scale parameters plus the labels
struct LabelStore {
  int n = 0, m = 0;
  Len length_bound = 1;
  LabelParams params;
  int i_max = 0;
  std::vector<ScaleParams> scale_params;
  std::vector<EdgeMeta> edge_meta;  // by id
  std::map<int, VLabel> vlabels;
  std::map<int, ELabel> elabels;

  const EdgeMeta* edge_by_id(int id) const;
};

LabelStore store_from_scheme(const LabelScheme& scheme);
std::vector<uint8_t> serialize_store(const LabelStore& st);
LabelStore deserialize_store(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> serialize_vlabel(const VLabel& vl);
std::vector<uint8_t> serialize_elabel(const ELabel& el);
VLabel deserialize_vlabel(const std::vector<uint8_t>& bytes);
ELabel deserialize_elabel(const std::vector<uint8_t>& bytes);

// byte size of the edge label with every referenced vertex label expanded in
// place (the size accounting the template's nesting implies)
long long expanded_elabel_size(const ELabel& el);

struct LabelSizeReport {
  long long total_vlabel_bytes = 0;
  long long max_vlabel_bytes = 0;
  long long total_elabel_bytes = 0;      // stored (deduplicated) form
  long long max_elabel_bytes = 0;
  long long total_expanded_elabel = 0;   // template form
  long long max_expanded_elabel = 0;
  long long nontrivial_elabels = 0;
  long long cluster_size_bound = 0;
};

LabelSizeReport measure_labels(const LabelScheme& scheme);

void write_file(const std::string& path, const std::vector<uint8_t>& bytes);
std::vector<uint8_t> read_file(const std::string& path);

}  // namespace ftl
