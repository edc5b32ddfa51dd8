#include "ostoc/instance.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ostoc/rng.hpp"

namespace ostoc {

using nlohmann::json;

std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::kFeasibility: return "feasibility";
    case InstanceKind::kLinear: return "linear";
    case InstanceKind::kPacking: return "packing";
    case InstanceKind::kCovering: return "covering";
    case InstanceKind::kSmooth: return "smooth";
  }
  return "feasibility";
}

InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "feasibility") return InstanceKind::kFeasibility;
  if (s == "linear") return InstanceKind::kLinear;
  if (s == "packing") return InstanceKind::kPacking;
  if (s == "covering") return InstanceKind::kCovering;
  if (s == "smooth") return InstanceKind::kSmooth;
  throw std::invalid_argument("unknown instance kind: " + s);
}

namespace {

bool is_zero_option(const OptionItem& o) {
  if (o.r.value_or(0.0) != 0.0) return false;
  for (int j = 0; j < o.v.dim(); ++j)
    if (o.v[j] != 0.0) return false;
  return true;
}

}  // namespace

void validate(const Instance& inst) {
  if (inst.d < 1) throw std::invalid_argument("instance: d < 1");
  if (inst.T < 1) throw std::invalid_argument("instance: T < 1");
  if (static_cast<int>(inst.requests.size()) != inst.T)
    throw std::invalid_argument("instance: requests length != T");
  if (inst.set.dim() != inst.d) throw std::invalid_argument("instance: set dimension mismatch");
  if (inst.objective.dim() != inst.d)
    throw std::invalid_argument("instance: objective dimension mismatch");
  const bool rewards = inst.has_rewards();
  for (const auto& req : inst.requests) {
    if (req.options.empty()) throw std::invalid_argument("instance: empty request");
    for (const auto& opt : req.options) {
      if (opt.v.dim() != inst.d) throw std::invalid_argument("instance: option dimension mismatch");
      for (int j = 0; j < inst.d; ++j)
        if (opt.v[j] < 0.0 || opt.v[j] > 1.0)
          throw std::invalid_argument("instance: option coordinate outside [0,1]");
      if (opt.r && (*opt.r < 0.0 || *opt.r > 1.0))
        throw std::invalid_argument("instance: reward outside [0,1]");
      if (rewards && !opt.r) throw std::invalid_argument("instance: option missing reward");
    }
  }
  if (inst.kind == InstanceKind::kPacking) {
    if (!inst.budget || *inst.budget <= 0.0)
      throw std::invalid_argument("instance: packing requires budget > 0");
    for (const auto& req : inst.requests) {
      bool has_zero = false;
      for (const auto& opt : req.options) has_zero = has_zero || is_zero_option(opt);
      if (!has_zero) throw std::invalid_argument("instance: packing request missing zero option");
    }
  }
  if (!inst.witness.empty()) {
    if (static_cast<int>(inst.witness.size()) != inst.T)
      throw std::invalid_argument("instance: witness length != T");
    for (int t = 0; t < inst.T; ++t) {
      const int w = inst.witness[static_cast<size_t>(t)];
      if (w < 0 || w >= static_cast<int>(inst.requests[static_cast<size_t>(t)].options.size()))
        throw std::invalid_argument("instance: witness index out of range");
    }
  }
}

namespace {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int j = 0; j < v.dim(); ++j) a.push_back(v[j]);
  return a;
}

Vec vec_from_json(const json& a) {
  std::vector<double> e;
  for (const auto& x : a) e.push_back(x.get<double>());
  return Vec(std::move(e));
}

std::string norm_to_string(NormKind k) {
  return k == NormKind::kEuclidean ? "euclidean" : "maxabs";
}

NormKind norm_from_string(const std::string& s) {
  if (s == "euclidean") return NormKind::kEuclidean;
  if (s == "maxabs") return NormKind::kMaxAbs;
  throw std::invalid_argument("unknown norm: " + s);
}

json objective_to_json(const Objective& f) {
  json o;
  switch (f.kind()) {
    case Objective::Kind::kZero:
      o["type"] = "zero";
      break;
    case Objective::Kind::kLinearReward:
      o["type"] = "linear_reward";
      break;
    case Objective::Kind::kSeparable: {
      o["type"] = "separable";
      json pieces = json::array();
      for (const auto& p : f.pieces()) {
        json pj;
        switch (p.kind) {
          case ConcavePiece::Kind::kLinear:
            pj["kind"] = "linear";
            pj["c"] = p.c;
            break;
          case ConcavePiece::Kind::kMinCap:
            pj["kind"] = "min_cap";
            pj["cap"] = p.cap;
            break;
          case ConcavePiece::Kind::kQuad:
            pj["kind"] = "quad";
            pj["a"] = p.a;
            pj["b"] = p.b;
            break;
          case ConcavePiece::Kind::kGeneric:
            throw std::invalid_argument("serialize: generic pieces are not serializable");
        }
        pieces.push_back(pj);
      }
      o["pieces"] = pieces;
      break;
    }
    case Objective::Kind::kQuadratic:
      o["type"] = "quadratic";
      o["a"] = vec_to_json(f.quad_a());
      o["x0"] = vec_to_json(f.quad_x0());
      o["beta"] = f.smoothness_beta().value();
      break;
  }
  return o;
}

Objective objective_from_json(const json& o, NormKind norm) {
  const std::string type = o.at("type").get<std::string>();
  if (type == "zero") return Objective::zero(o.at("d").get<int>());
  if (type == "linear_reward") return Objective::linear_reward(o.at("d").get<int>());
  if (type == "separable") {
    std::vector<ConcavePiece> pieces;
    for (const auto& pj : o.at("pieces")) {
      const std::string kind = pj.at("kind").get<std::string>();
      if (kind == "linear")
        pieces.push_back(ConcavePiece::linear(pj.at("c").get<double>()));
      else if (kind == "min_cap")
        pieces.push_back(ConcavePiece::min_cap(pj.at("cap").get<double>()));
      else if (kind == "quad")
        pieces.push_back(ConcavePiece::quad(pj.at("a").get<double>(), pj.at("b").get<double>()));
      else
        throw std::invalid_argument("unknown piece kind: " + kind);
    }
    return Objective::separable(std::move(pieces), norm);
  }
  if (type == "quadratic")
    return Objective::quadratic(vec_from_json(o.at("a")), vec_from_json(o.at("x0")),
                                o.at("beta").get<double>(), norm);
  throw std::invalid_argument("unknown objective type: " + type);
}

}  // namespace

std::string serialize(const Instance& inst) {
  json header;
  header["d"] = inst.d;
  header["T"] = inst.T;
  header["kind"] = to_string(inst.kind);
  json set;
  set["lower"] = vec_to_json(inst.set.lower());
  set["upper"] = vec_to_json(inst.set.upper());
  set["norm"] = norm_to_string(inst.set.distance_norm());
  header["set"] = set;
  header["objective"] = objective_to_json(inst.objective);
  if (inst.budget) header["B"] = *inst.budget;
  if (!inst.witness.empty()) header["witness"] = inst.witness;
  std::string out = header.dump();
  out.push_back('\n');
  for (const auto& req : inst.requests) {
    json line;
    json opts = json::array();
    for (const auto& opt : req.options) {
      json oj;
      oj["v"] = vec_to_json(opt.v);
      if (opt.r) oj["r"] = *opt.r;
      opts.push_back(oj);
    }
    line["opts"] = opts;
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

Instance parse_instance(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("parse: empty input");
  json header = json::parse(line);
  Instance inst;
  inst.d = header.at("d").get<int>();
  inst.T = header.at("T").get<int>();
  inst.kind = instance_kind_from_string(header.at("kind").get<std::string>());
  const json& set = header.at("set");
  const NormKind norm = norm_from_string(set.at("norm").get<std::string>());
  inst.set = ConvexSetSpec::box(vec_from_json(set.at("lower")), vec_from_json(set.at("upper")), norm);
  json obj = header.at("objective");
  obj["d"] = inst.d;  // zero/linear_reward need the dimension
  inst.objective = objective_from_json(obj, norm);
  if (header.contains("B")) inst.budget = header.at("B").get<double>();
  if (header.contains("witness")) inst.witness = header.at("witness").get<std::vector<int>>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json lj = json::parse(line);
    Request req;
    for (const auto& oj : lj.at("opts")) {
      OptionItem opt;
      opt.v = vec_from_json(oj.at("v"));
      if (oj.contains("r")) opt.r = oj.at("r").get<double>();
      req.options.push_back(std::move(opt));
    }
    inst.requests.push_back(std::move(req));
  }
  validate(inst);
  return inst;
}

namespace {

std::string gunzip(const std::string& raw) {
  z_stream zs{};
  if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK) throw std::runtime_error("gzip: inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(raw.data()));
  zs.avail_in = static_cast<uInt>(raw.size());
  std::string out;
  char buf[1 << 15];
  int ret = Z_OK;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    ret = inflate(&zs, Z_NO_FLUSH);
    if (ret != Z_OK && ret != Z_STREAM_END) {
      inflateEnd(&zs);
      throw std::runtime_error("gzip: corrupt stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (ret != Z_STREAM_END);
  inflateEnd(&zs);
  return out;
}

}  // namespace

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << serialize(inst);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string raw = ss.str();
  if (raw.size() >= 2 && static_cast<unsigned char>(raw[0]) == 0x1f &&
      static_cast<unsigned char>(raw[1]) == 0x8b)
    raw = gunzip(raw);
  return parse_instance(raw);
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string instance_hash(const Instance& inst) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(serialize(inst))));
  return std::string(buf);
}

namespace {

// Witness vectors with average exactly at target: w_t = y* + rho*(u_t - mean(u)),
// rho shrunk so every w_t stays in [0,1]^d.
std::vector<Vec> witness_cloud(Rng& rng, int T, const Vec& target) {
  const int d = target.dim();
  std::vector<Vec> u(static_cast<size_t>(T), Vec::zeros(d));
  Vec mean = Vec::zeros(d);
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < d; ++j) u[static_cast<size_t>(t)][j] = rng.uniform01();
    mean += u[static_cast<size_t>(t)];
  }
  mean *= 1.0 / static_cast<double>(T);
  double rho = 1.0;
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < d; ++j) {
      const double dev = u[static_cast<size_t>(t)][j] - mean[j];
      if (dev > 1e-12) rho = std::min(rho, (1.0 - target[j]) / dev);
      if (dev < -1e-12) rho = std::min(rho, target[j] / (-dev));
    }
  }
  rho *= 0.9;
  std::vector<Vec> w(static_cast<size_t>(T), Vec::zeros(d));
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < d; ++j)
      w[static_cast<size_t>(t)][j] =
          std::clamp(target[j] + rho * (u[static_cast<size_t>(t)][j] - mean[j]), 0.0, 1.0);
  return w;
}

Vec random_point_between(Rng& rng, const Vec& lo, const Vec& hi, double margin) {
  Vec p = Vec::zeros(lo.dim());
  for (int j = 0; j < lo.dim(); ++j) {
    const double a = lo[j] + margin * (hi[j] - lo[j]);
    const double b = hi[j] - margin * (hi[j] - lo[j]);
    p[j] = rng.uniform(a, b);
  }
  return p;
}

Objective default_objective(const GenParams& p, Rng& rng, const Vec& set_upper) {
  if (p.objective == "zero" || (p.objective == "auto" && (p.kind == InstanceKind::kFeasibility ||
                                                          p.kind == InstanceKind::kCovering)))
    return Objective::zero(p.d);
  if (p.objective == "auto" && (p.kind == InstanceKind::kLinear || p.kind == InstanceKind::kPacking))
    return Objective::linear_reward(p.d);
  if (p.objective == "separable") {
    std::vector<ConcavePiece> pieces;
    for (int j = 0; j < p.d; ++j) pieces.push_back(ConcavePiece::min_cap(rng.uniform(0.3, 0.7)));
    return Objective::separable(std::move(pieces), p.norm);
  }
  if (p.objective == "quadratic" || (p.objective == "auto" && p.kind == InstanceKind::kSmooth)) {
    Vec a = Vec::zeros(p.d), x0 = Vec::zeros(p.d);
    for (int j = 0; j < p.d; ++j) {
      a[j] = rng.uniform(0.2, 1.0);
      x0[j] = std::min(1.0, set_upper[j] + rng.uniform(0.1, 0.4));
    }
    return Objective::quadratic(std::move(a), std::move(x0), p.quad_beta, p.norm);
  }
  throw std::invalid_argument("generate: unknown objective kind: " + p.objective);
}

}  // namespace

Instance generate(const GenParams& p) {
  if (p.d < 1 || p.T < 1 || p.options_per_step < 1)
    throw std::invalid_argument("generate: d, T, options_per_step must be >= 1");
  Rng set_rng = Rng(p.seed).fork(1);
  Rng witness_rng = Rng(p.seed).fork(2);
  Rng decoy_rng = Rng(p.seed).fork(3);
  Rng obj_rng = Rng(p.seed).fork(4);

  Instance inst;
  inst.d = p.d;
  inst.T = p.T;
  inst.kind = p.kind;

  // Target set by kind.
  switch (p.kind) {
    case InstanceKind::kFeasibility:
    case InstanceKind::kLinear: {
      Vec lo = p.box_lower, hi = p.box_upper;
      if (lo.empty()) {
        lo = Vec::zeros(p.d);
        hi = Vec::zeros(p.d);
        for (int j = 0; j < p.d; ++j) {
          lo[j] = set_rng.uniform(0.1, 0.35);
          hi[j] = lo[j] + set_rng.uniform(0.1, 0.3);
        }
      }
      inst.set = ConvexSetSpec::box(lo, hi, p.norm);
      break;
    }
    case InstanceKind::kPacking: {
      const double B = p.budget >= 0.0 ? p.budget : static_cast<double>(p.T) / 4.0;
      if (B <= 0.0) throw InfeasibleError("generate: packing budget must be > 0");
      if (B / p.T > 1.0) throw InfeasibleError("generate: B/T > 1 leaves the cap set outside [0,1]^d");
      inst.budget = B;
      inst.set = ConvexSetSpec::budget_cap(Vec::constant(p.d, B / p.T), p.norm);
      break;
    }
    case InstanceKind::kCovering: {
      Vec floor_vec = p.floor_vec;
      if (floor_vec.empty()) {
        floor_vec = Vec::zeros(p.d);
        for (int j = 0; j < p.d; ++j) floor_vec[j] = set_rng.uniform(0.3, 0.6);
      }
      for (int j = 0; j < p.d; ++j)
        if (floor_vec[j] > 1.0) throw InfeasibleError("generate: covering floor > 1");
      inst.set = ConvexSetSpec::cover_floor(floor_vec, p.norm);
      break;
    }
    case InstanceKind::kSmooth: {
      if (!p.box_lower.empty()) {
        inst.set = ConvexSetSpec::box(p.box_lower, p.box_upper, p.norm);
        break;
      }
      Vec cap = p.cap;
      if (cap.empty()) {
        cap = Vec::zeros(p.d);
        for (int j = 0; j < p.d; ++j) cap[j] = set_rng.uniform(0.25, 0.45);
      }
      inst.set = ConvexSetSpec::budget_cap(cap, p.norm);
      break;
    }
  }

  inst.objective = default_objective(p, obj_rng, inst.set.upper());

  const bool rewards = p.kind == InstanceKind::kLinear || p.kind == InstanceKind::kPacking;
  Vec reward_weights = Vec::zeros(p.d);
  for (int j = 0; j < p.d; ++j) reward_weights[j] = obj_rng.uniform(0.5, 1.0);

  auto draw_reward = [&](const Vec& v) {
    const double coupled = dot(reward_weights, v) / static_cast<double>(p.d);
    const double noise = decoy_rng.uniform01();
    return std::clamp(p.reward_coupling * coupled + (1.0 - p.reward_coupling) * noise, 0.0, 1.0);
  };

  if (p.kind == InstanceKind::kPacking) {
    // Zero option first, then random rewarded options.
    for (int t = 0; t < p.T; ++t) {
      Request req;
      req.options.push_back({Vec::zeros(p.d), 0.0});
      for (int i = 1; i < std::max(2, p.options_per_step); ++i) {
        OptionItem opt;
        opt.v = Vec::zeros(p.d);
        for (int j = 0; j < p.d; ++j) opt.v[j] = decoy_rng.uniform01();
        opt.r = draw_reward(opt.v);
        req.options.push_back(std::move(opt));
      }
      inst.requests.push_back(std::move(req));
      inst.witness.push_back(0);
    }
  } else {
    // Witness-first: draw a cloud averaging into the interior of S, then
    // put each witness at a random slot among the decoys.
    const Vec target = random_point_between(witness_rng, inst.set.lower(), inst.set.upper(), 0.3);
    const std::vector<Vec> wit = witness_cloud(witness_rng, p.T, target);
    const bool near = p.decoy_style == "near_witness";
    const bool spike = p.decoy_style == "spike";
    const bool capped = p.decoy_style == "uniform_capped";
    if (!near && !spike && !capped && p.decoy_style != "uniform")
      throw std::invalid_argument("generate: unknown decoy_style: " + p.decoy_style);
    if (p.singleton_fraction < 0.0 || p.singleton_fraction > 1.0)
      throw std::invalid_argument("generate: singleton_fraction outside [0,1]");
    for (int t = 0; t < p.T; ++t) {
      Request req;
      const int k_t = decoy_rng.uniform01() < p.singleton_fraction ? 1 : p.options_per_step;
      const int slot = k_t == 1 ? 0 : decoy_rng.uniform_int(k_t);
      for (int i = 0; i < k_t; ++i) {
        OptionItem opt;
        if (i == slot) {
          opt.v = wit[static_cast<size_t>(t)];
        } else if (spike) {
          // Differs from the witness in one random coordinate only.
          opt.v = wit[static_cast<size_t>(t)];
          const int j = decoy_rng.uniform_int(p.d);
          const double sgn = decoy_rng.uniform01() < 0.5 ? -1.0 : 1.0;
          opt.v[j] = std::clamp(opt.v[j] + sgn * p.decoy_radius, 0.0, 1.0);
        } else {
          opt.v = Vec::zeros(p.d);
          for (int j = 0; j < p.d; ++j) {
            if (near)
              opt.v[j] = std::clamp(wit[static_cast<size_t>(t)][j] +
                                        decoy_rng.uniform(-p.decoy_radius, p.decoy_radius),
                                    0.0, 1.0);
            else if (capped)
              opt.v[j] = decoy_rng.uniform(0.0, std::min(1.0, p.decoy_radius));
            else
              opt.v[j] = decoy_rng.uniform01();
          }
        }
        if (rewards) opt.r = draw_reward(opt.v);
        req.options.push_back(std::move(opt));
      }
      inst.requests.push_back(std::move(req));
      inst.witness.push_back(slot);
    }
  }

  validate(inst);
  return inst;
}

StreamOrder rp_stream(const Instance& inst, uint64_t seed) {
  StreamOrder s;
  s.mode = StreamOrder::Mode::kRp;
  s.seed = seed;
  s.order.resize(static_cast<size_t>(inst.T));
  for (int t = 0; t < inst.T; ++t) s.order[static_cast<size_t>(t)] = t;
  Rng rng(seed);
  rng.shuffle(s.order);
  return s;
}

StreamOrder iid_stream(const Instance& inst, uint64_t seed, int T_out) {
  StreamOrder s;
  s.mode = StreamOrder::Mode::kIid;
  s.seed = seed;
  const int n = T_out < 0 ? inst.T : T_out;
  Rng rng(seed);
  s.order.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) s.order.push_back(rng.uniform_int(inst.T));
  return s;
}

StreamOrder iid_stream_weighted(const Instance& inst, uint64_t seed,
                                const std::vector<double>& weights, int T_out) {
  if (static_cast<int>(weights.size()) != inst.T)
    throw std::invalid_argument("iid_stream_weighted: weights length != T");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("iid_stream_weighted: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("iid_stream_weighted: zero total weight");
  StreamOrder s;
  s.mode = StreamOrder::Mode::kIid;
  s.seed = seed;
  const int n = T_out < 0 ? inst.T : T_out;
  Rng rng(seed);
  for (int t = 0; t < n; ++t) {
    double x = rng.uniform01() * total, acc = 0.0;
    int pick = inst.T - 1;
    for (int i = 0; i < inst.T; ++i) {
      acc += weights[static_cast<size_t>(i)];
      if (x < acc) {
        pick = i;
        break;
      }
    }
    s.order.push_back(pick);
  }
  return s;
}

}  // namespace ostoc
