#include "gvlab/cache.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace gvlab::cache {

namespace {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

std::string format_record(const Record& r) {
    std::ostringstream os;
    os << r.form_id << ' ' << r.d << ' ' << r.H << ' ' << r.t << ' ' << r.u << ' '
       << fmt_double(r.value_re) << ' ' << fmt_double(r.value_im) << ' '
       << fmt_double(r.normalized) << ' ' << fmt_double(r.quad_err);
    std::string body = os.str();
    char crc[24];
    std::snprintf(crc, sizeof crc, " %016" PRIx64, fnv1a(body));
    return body + crc;
}

Record parse_record(const std::string& line) {
    auto pos = line.find_last_of(' ');
    if (pos == std::string::npos) throw CacheCorrupt("record too short");
    std::string body = line.substr(0, pos);
    std::string crc = line.substr(pos + 1);
    char expect[24];
    std::snprintf(expect, sizeof expect, "%016" PRIx64, fnv1a(body));
    if (crc != expect) throw CacheCorrupt("checksum mismatch");
    std::istringstream is(body);
    Record r;
    std::string ts, us;
    if (!(is >> r.form_id >> r.d >> r.H >> ts >> us >> r.value_re >> r.value_im >>
          r.normalized >> r.quad_err))
        throw CacheCorrupt("malformed record body");
    try {
        r.t = BigInt(ts);
        r.u = BigInt(us);
    } catch (...) {
        throw CacheCorrupt("malformed Pell data");
    }
    return r;
}

PeriodCache::PeriodCache(std::string path) : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ifstream in(path_);
    if (in) {
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            try {
                Record r = parse_record(line);
                map_[{r.form_id, r.d}] = std::move(r);
            } catch (const CacheCorrupt& e) {
                throw CacheCorrupt(path_ + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
    }
    out_.open(path_, std::ios::app);
    if (!out_) throw DataError("cannot open cache for append: " + path_);
}

bool PeriodCache::has(const std::string& form_id, int64_t d) const {
    return lookup(form_id, d, nullptr);
}

bool PeriodCache::lookup(const std::string& form_id, int64_t d, Record* out) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find({form_id, d});
    if (it == map_.end()) return false;
    if (out) *out = it->second;
    return true;
}

void PeriodCache::append(const Record& r) {
    // canonicalize through the 15-digit text form so the in-memory state is
    // identical to what a reload would produce
    std::string line = format_record(r);
    Record canon = parse_record(line);
    std::lock_guard<std::mutex> lock(mu_);
    map_[{canon.form_id, canon.d}] = std::move(canon);
    if (!path_.empty()) {
        out_ << line << '\n';
        out_.flush();
    }
}

size_t PeriodCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
}

std::vector<Record> PeriodCache::records_for(const std::string& form_id) const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<Record> out;
    for (auto it = map_.lower_bound({form_id, INT64_MIN});
         it != map_.end() && it->first.first == form_id; ++it)
        out.push_back(it->second);
    return out;
}

size_t verify_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cache: " + path);
    std::string line;
    size_t lineno = 0, n = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            parse_record(line);
        } catch (const CacheCorrupt& e) {
            throw CacheCorrupt(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ++n;
    }
    return n;
}

size_t compact_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cache: " + path);
    std::map<std::pair<std::string, int64_t>, std::string> keep;
    std::string line;
    size_t lineno = 0, total = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Record r;
        try {
            r = parse_record(line);
        } catch (const CacheCorrupt& e) {
            throw CacheCorrupt(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        keep[{r.form_id, r.d}] = line;
        ++total;
    }
    in.close();
    std::string tmp = path + ".compact.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp);
        for (const auto& [k, l] : keep) out << l << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw DataError("atomic rename failed for " + path);
    return total - keep.size();
}

std::vector<FormStats> stats_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open cache: " + path);
    std::map<std::string, std::vector<int64_t>> by_form;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Record r = parse_record(line);
        by_form[r.form_id].push_back(r.d);
    }
    std::vector<FormStats> out;
    for (auto& [id, ds] : by_form) {
        std::sort(ds.begin(), ds.end());
        ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
        FormStats st;
        st.form_id = id;
        st.records = ds.size();
        st.d_min = ds.front();
        st.d_max = ds.back();
        // contiguous runs over valid discriminants
        int64_t run_start = ds.front(), prev = ds.front();
        auto next_valid = [](int64_t d) {
            int64_t n = d + 1;
            while (!qforms::is_discriminant(n).valid) ++n;
            return n;
        };
        for (size_t i = 1; i < ds.size(); ++i) {
            if (ds[i] != next_valid(prev)) {
                st.coverage.emplace_back(run_start, prev);
                run_start = ds[i];
            }
            prev = ds[i];
        }
        st.coverage.emplace_back(run_start, prev);
        out.push_back(std::move(st));
    }
    return out;
}

}  // namespace gvlab::cache
