#ifndef GVLAB_CACHE_HPP
#define GVLAB_CACHE_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "gvlab/qforms.hpp"

namespace gvlab::cache {

struct Record {
    std::string form_id;
    int64_t d = 0;
    int64_t H = 0;
    BigInt t, u;
    double value_re = 0, value_im = 0;
    double normalized = 0;  // value_re / d^{1/4}
    double quad_err = 0;
};

std::string format_record(const Record& r);     // line without newline, checksum included
Record parse_record(const std::string& line);   // throws CacheCorrupt on bad checksum/shape

// Append-only text cache keyed by (form_id, d). Loading keeps the last record
// per key; appends are serialized. An empty path gives an in-memory cache.
class PeriodCache {
  public:
    explicit PeriodCache(std::string path);

    bool has(const std::string& form_id, int64_t d) const;
    bool lookup(const std::string& form_id, int64_t d, Record* out = nullptr) const;
    void append(const Record& r);
    size_t size() const;
    const std::string& path() const { return path_; }

    // all records of one form, sorted by discriminant
    std::vector<Record> records_for(const std::string& form_id) const;

  private:
    std::string path_;
    mutable std::mutex mu_;
    std::map<std::pair<std::string, int64_t>, Record> map_;
    std::ofstream out_;
};

// Admin operations on raw cache files.
size_t verify_file(const std::string& path);   // returns #records; throws CacheCorrupt
size_t compact_file(const std::string& path);  // dedupe by key, keep latest; returns #removed

struct FormStats {
    std::string form_id;
    size_t records = 0;
    int64_t d_min = 0, d_max = 0;
    // maximal runs of contiguous valid discriminants covered
    std::vector<std::pair<int64_t, int64_t>> coverage;
};

std::vector<FormStats> stats_file(const std::string& path);

}  // namespace gvlab::cache

#endif
