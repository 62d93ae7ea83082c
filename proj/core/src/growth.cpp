#include "loxgrow/growth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>
#include <tuple>
#include <utility>

#include "absl/container/flat_hash_set.h"
#include "absl/hash/hash.h"
#include "loxgrow/errors.hpp"
#include "loxgrow/free_group_tree.hpp"
#include "loxgrow/free_product_tree.hpp"
#include "loxgrow/half_plane.hpp"

namespace loxgrow {
namespace {

// Below this frontier size threads cost more than they save.
constexpr std::size_t kParallelThreshold = 4096;
constexpr std::size_t kMaxCountPasses = 64;

// Frontier-by-frontier search keeping only layers n-1, n and n+1. Since S is
// symmetric, every neighbour of layer n lies in one of those three.
template <class State, class Key, class Hash, class KeyFn, class Step>
GrowthTable layered_bfs(const State& one, std::size_t gens, KeyFn key_of,
                        Step step, const GrowthOptions& opt) {
  GrowthTable t;
  t.requested_radius = opt.n_max;
  t.ball.push_back(1);
  t.sphere.push_back(1);

  absl::flat_hash_set<Key, Hash> seen;
  seen.insert(key_of(one));
  std::vector<State> prev, cur{one};
  t.peak_stored = 1;
  const std::size_t workers = static_cast<std::size_t>(std::max(1, opt.workers));

  for (int n = 1; n <= opt.n_max; ++n) {
    if (n == opt.n_max) {
      // The last sphere is only counted, so it can be split by hash into
      // passes that each fit beside layers n-1 and n.
      const std::size_t bound = cur.size() * gens;
      const std::size_t room = opt.memory_cap > seen.size() ? opt.memory_cap - seen.size() : 0;
      const std::size_t passes =
          room == 0 ? 1 : std::min<std::size_t>(kMaxCountPasses, (bound + room - 1) / room);
      if (passes > 1) {
        std::uint64_t count = 0;
        bool over = false;
        try {
          for (std::size_t pass = 0; pass < passes && !over; ++pass) {
            std::vector<Key> added;
            for (std::size_t i = 0; i < cur.size() && !over; ++i) {
              for (std::size_t g = 0; g < gens && !over; ++g) {
                Key k = key_of(step(cur[i], g));
                if ((Hash{}(k) >> 7) % passes != pass) continue;
                if (!seen.insert(k).second) continue;
                added.push_back(std::move(k));
                if (seen.size() > opt.memory_cap) over = true;
              }
            }
            t.peak_stored = std::max(t.peak_stored, seen.size());
            count += added.size();
            for (const Key& k : added) seen.erase(k);
          }
        } catch (const ArithmeticOverflow&) {
          over = true;
        }
        if (over) {
          t.budget_exceeded = true;
          break;
        }
        t.sphere.push_back(count);
        t.ball.push_back(t.ball.back() + count);
        t.last_complete_radius = n;
        break;
      }
    }
    std::vector<State> next;
    bool over = false;
    auto admit = [&](Key k, State y) {
      if (!seen.insert(std::move(k)).second) return;
      next.push_back(std::move(y));
      if (seen.size() > opt.memory_cap) over = true;
    };
    try {
      if (workers == 1 || cur.size() < kParallelThreshold) {
        for (std::size_t i = 0; i < cur.size() && !over; ++i) {
          for (std::size_t g = 0; g < gens && !over; ++g) {
            State y = step(cur[i], g);
            Key k = key_of(y);
            admit(std::move(k), std::move(y));
          }
        }
      } else {
        const std::size_t chunk = (cur.size() + workers - 1) / workers;
        std::vector<std::vector<std::pair<Key, State>>> parts(workers);
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
          pool.emplace_back([&, w] {
            try {
              const std::size_t lo = w * chunk;
              const std::size_t hi = std::min(cur.size(), lo + chunk);
              for (std::size_t i = lo; i < hi; ++i) {
                for (std::size_t g = 0; g < gens; ++g) {
                  State y = step(cur[i], g);
                  Key k = key_of(y);
                  if (!seen.contains(k)) parts[w].emplace_back(std::move(k), std::move(y));
                }
              }
            } catch (...) {
              errors[w] = std::current_exception();
            }
          });
        }
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& e : errors) {
          if (e) std::rethrow_exception(e);
        }
        for (auto& part : parts) {
          for (auto& [k, y] : part) {
            admit(std::move(k), std::move(y));
            if (over) break;
          }
          if (over) break;
          part.clear();
          part.shrink_to_fit();
        }
      }
    } catch (const ArithmeticOverflow&) {
      over = true;
    }
    t.peak_stored = std::max(t.peak_stored, seen.size());
    if (over) {
      t.budget_exceeded = true;
      break;
    }
    for (const State& x : prev) seen.erase(key_of(x));
    prev = std::move(cur);
    cur = std::move(next);
    t.sphere.push_back(cur.size());
    t.ball.push_back(t.ball.back() + cur.size());
    t.last_complete_radius = n;
  }

  const std::size_t rows = t.ball.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.upper.assign(rows, nan);
  t.ratio_estimate.assign(rows, nan);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < rows; ++n) {
    best = std::min(best, std::log(static_cast<double>(t.ball[n])) / n);
    t.upper[n] = best;
    t.ratio_estimate[n] = std::log(static_cast<double>(t.ball[n]) /
                                   static_cast<double>(t.ball[n - 1]));
  }
  return t;
}

// Reduced free group words of length <= 31 over at most 14 letters, four bits
// per letter (letter i in bits 4i..4i+3, code 0 past the end).
__extension__ using Packed = unsigned __int128;
constexpr int kPackedMaxLength = 31;

struct PackedHash {
  std::size_t operator()(Packed v) const {
    return absl::Hash<std::pair<std::uint64_t, std::uint64_t>>{}(
        {static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)});
  }
};

int packed_length(Packed v) {
  const auto hi = static_cast<std::uint64_t>(v >> 64);
  const auto lo = static_cast<std::uint64_t>(v);
  const int bits = hi != 0 ? 128 - __builtin_clzll(hi)
                           : (lo != 0 ? 64 - __builtin_clzll(lo) : 0);
  return (bits + 3) / 4;
}

std::uint8_t letter_code(char c) {
  return static_cast<std::uint8_t>(FreeGroupTree::letter_rank(c) + 1);
}

std::uint8_t inverse_code(std::uint8_t c) { return (c & 1) ? c + 1 : c - 1; }

Packed packed_multiply(Packed x, const std::vector<std::uint8_t>& s) {
  int len = packed_length(x);
  for (std::uint8_t c : s) {
    if (len > 0 &&
        static_cast<std::uint8_t>((x >> (4 * (len - 1))) & 0xF) == inverse_code(c)) {
      --len;
      x &= ~(static_cast<Packed>(0xF) << (4 * len));
    } else {
      x |= static_cast<Packed>(c) << (4 * len);
      ++len;
    }
  }
  return x;
}

struct IntMatrixHash {
  std::size_t operator()(const IntMatrix& m) const {
    return absl::Hash<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>>{}(
        std::make_tuple(m.a, m.b, m.c, m.d));
  }
};

struct QuantHash {
  std::size_t operator()(const std::array<std::int64_t, 4>& q) const {
    return absl::Hash<std::array<std::int64_t, 4>>{}(q);
  }
};

template <class T>
std::vector<T> canonicals(const GeneratingSet& S) {
  std::vector<T> out;
  out.reserve(S.size());
  for (const GroupElement& s : S) out.push_back(std::get<T>(s.canonical));
  return out;
}

}  // namespace

GrowthTable ball_sizes(const Space& space, const GeneratingSet& S,
                       const GrowthOptions& options) {
  if (options.n_max < 1) throw OutOfRange("ball_sizes needs n_max >= 1");
  if (options.memory_cap < 1) throw OutOfRange("memory_cap must be positive");
  const std::size_t gens = S.size();

  if (const auto* fg = dynamic_cast<const FreeGroupTree*>(&space)) {
    const std::vector<std::string> words = canonicals<std::string>(S);
    std::size_t longest = 0;
    for (const std::string& w : words) longest = std::max(longest, w.size());
    const bool packable = fg->rank() <= 7 &&
                          longest * static_cast<std::size_t>(options.n_max) <=
                              static_cast<std::size_t>(kPackedMaxLength);
    if (packable) {
      std::vector<std::vector<std::uint8_t>> codes;
      for (const std::string& w : words) {
        std::vector<std::uint8_t> c;
        for (char ch : w) c.push_back(letter_code(ch));
        codes.push_back(std::move(c));
      }
      return layered_bfs<Packed, Packed, PackedHash>(
          Packed{0}, gens, [](Packed v) { return v; },
          [&](Packed x, std::size_t g) { return packed_multiply(x, codes[g]); },
          options);
    }
    return layered_bfs<std::string, std::string, absl::Hash<std::string>>(
        std::string{}, gens, [](const std::string& v) { return v; },
        [&](const std::string& x, std::size_t g) {
          return FreeGroupTree::multiply(x, words[g]);
        },
        options);
  }

  if (const auto* fp = dynamic_cast<const FreeProductTree*>(&space)) {
    const std::vector<std::string> words = canonicals<std::string>(S);
    return layered_bfs<std::string, std::string, absl::Hash<std::string>>(
        std::string{}, gens, [](const std::string& v) { return v; },
        [&](const std::string& x, std::size_t g) { return fp->multiply(x, words[g]); },
        options);
  }

  const auto* hp = dynamic_cast<const HalfPlane*>(&space);
  if (hp == nullptr) throw BackendMismatch("ball_sizes: unknown backend");
  if (hp->integral()) {
    const std::vector<IntMatrix> mats = canonicals<IntMatrix>(S);
    return layered_bfs<IntMatrix, IntMatrix, IntMatrixHash>(
        IntMatrix::identity(), gens, [](const IntMatrix& v) { return v; },
        [&](const IntMatrix& x, std::size_t g) {
          return multiply(x, mats[g]).normalized();
        },
        options);
  }
  const std::vector<RealMatrix> mats = canonicals<RealMatrix>(S);
  return layered_bfs<RealMatrix, std::array<std::int64_t, 4>, QuantHash>(
      RealMatrix::identity(), gens,
      [](const RealMatrix& v) { return HalfPlane::quantize(v); },
      [&](const RealMatrix& x, std::size_t g) {
        return multiply(x, mats[g]).normalized();
      },
      options);
}

GrowthBrackets growth_brackets(const GrowthTable& table) {
  if (table.max_radius() < 2) {
    throw OutOfRange("growth_brackets needs radii up to at least 2");
  }
  const int n = table.max_radius();
  return {table.upper[n], table.ratio_estimate[n]};
}

double omega_fit(const GrowthTable& table) {
  const int n = table.max_radius();
  if (n < 2) throw OutOfRange("omega_fit needs radii up to at least 2");
  const int lo = std::max(1, (n + 1) / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (int i = lo; i <= n; ++i) {
    const double y = std::log(static_cast<double>(table.ball[i]));
    sx += i;
    sy += y;
    sxx += static_cast<double>(i) * i;
    sxy += i * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return table.ratio_estimate[n];
  return (count * sxy - sx * sy) / denom;
}

double theta_ratio(const GrowthTable& table, const GeneratingSet& S) {
  if (S.size() < 2) throw ConfigError("theta_ratio needs #S >= 2");
  return growth_brackets(table).omega_hat / std::log(static_cast<double>(S.size()));
}

std::string growth_csv(const GrowthTable& table) {
  std::string out = "n,ball,sphere,upper_bound,ratio_estimate\n";
  char buf[160];
  for (std::size_t n = 0; n < table.ball.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%zu,%llu,%llu,%.9g,%.9g\n", n,
                  static_cast<unsigned long long>(table.ball[n]),
                  static_cast<unsigned long long>(table.sphere[n]),
                  table.upper[n], table.ratio_estimate[n]);
    out += buf;
  }
  return out;
}

}  // namespace loxgrow
