#include "interp.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <variant>

namespace driftlens {

// -- environment spellings ---------------------------------------------------

FPEnvironment parse_fp_environment(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 4)
    throw Error(ErrorKind::Usage,
                strf("environment spec '%s' needs 4 comma-separated fields",
                     spec.c_str()));
  FPEnvironment env;
  const std::string& a = parts[0];
  if (a == "left") env.assoc = AssocOrder::LeftToRight;
  else if (a == "right") env.assoc = AssocOrder::RightToLeft;
  else if (a == "pairwise") env.assoc = AssocOrder::PairwiseTree;
  else throw Error(ErrorKind::Usage, strf("unknown association order '%s'", a.c_str()));
  const std::string& p = parts[1];
  if (p == "storage") env.precision = Precision::Storage;
  else if (p == "extended") env.precision = Precision::Extended;
  else throw Error(ErrorKind::Usage, strf("unknown precision '%s'", p.c_str()));
  const std::string& s = parts[2];
  if (s == "aswritten") env.shortcircuit = ShortCircuitOrder::AsWritten;
  else if (s == "reversed") env.shortcircuit = ShortCircuitOrder::Reversed;
  else throw Error(ErrorKind::Usage, strf("unknown short-circuit order '%s'", s.c_str()));
  std::string u = parts[3];
  if (u == "zero") {
    env.uninit.kind = UninitFill::Kind::Zero;
  } else if (u == "space") {
    env.uninit.kind = UninitFill::Kind::SpacePattern;
  } else if (u.rfind("seeded", 0) == 0) {
    env.uninit.kind = UninitFill::Kind::Seeded;
    if (u.size() > 6) {
      if (u[6] != ':')
        throw Error(ErrorKind::Usage, strf("bad uninit fill '%s'", u.c_str()));
      env.uninit.seed = std::strtoull(u.c_str() + 7, nullptr, 10);
    }
  } else {
    throw Error(ErrorKind::Usage, strf("unknown uninit fill '%s'", u.c_str()));
  }
  return env;
}

std::string fp_environment_spec(const FPEnvironment& env) {
  std::string a = env.assoc == AssocOrder::LeftToRight    ? "left"
                  : env.assoc == AssocOrder::RightToLeft ? "right"
                                                         : "pairwise";
  std::string p = env.precision == Precision::Storage ? "storage" : "extended";
  std::string s =
      env.shortcircuit == ShortCircuitOrder::AsWritten ? "aswritten" : "reversed";
  std::string u;
  switch (env.uninit.kind) {
    case UninitFill::Kind::Zero: u = "zero"; break;
    case UninitFill::Kind::SpacePattern: u = "space"; break;
    case UninitFill::Kind::Seeded:
      u = strf("seeded:%llu", (unsigned long long)env.uninit.seed);
      break;
  }
  return a + "," + p + "," + s + "," + u;
}

FPEnvironment fp_environment_preset(const std::string& name) {
  if (name == "A" || name == "a")
    return parse_fp_environment("left,storage,aswritten,space");
  if (name == "B" || name == "b")
    return parse_fp_environment("pairwise,extended,reversed,zero");
  throw Error(ErrorKind::Usage, strf("unknown environment preset '%s'", name.c_str()));
}

// -- runtime values ----------------------------------------------------------

namespace {

// Extended-precision intermediate: kept wide until it reaches a storage
// boundary (assignment, argument association, trace read).
struct ExtReal {
  long double v = 0.0L;
  TypeKind nominal = TypeKind::Real8;
};

using Value = std::variant<int32_t, float, double, bool, std::string, ExtReal>;

[[noreturn]] void fault(SourceLoc loc, std::string msg) {
  fail(ErrorKind::Runtime, loc, std::move(msg));
}

TypeKind value_real_kind(const Value& v) {
  if (std::holds_alternative<float>(v)) return TypeKind::Real4;
  if (std::holds_alternative<double>(v)) return TypeKind::Real8;
  if (const auto* e = std::get_if<ExtReal>(&v)) return e->nominal;
  return TypeKind::Unknown;
}

long double as_ld(const Value& v) {
  if (const auto* f = std::get_if<float>(&v)) return *f;
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* e = std::get_if<ExtReal>(&v)) return e->v;
  if (const auto* i = std::get_if<int32_t>(&v)) return *i;
  return 0.0L;
}

// Rounds a runtime value to the given storage type.
Value to_storage(const Value& v, const Type& t, SourceLoc loc) {
  switch (t.kind) {
    case TypeKind::Int:
      if (const auto* i = std::get_if<int32_t>(&v)) return *i;
      fault(loc, "integer value expected");
    case TypeKind::Real4:
      return (float)as_ld(v);
    case TypeKind::Real8:
      return (double)as_ld(v);
    case TypeKind::Logical:
      if (const auto* b = std::get_if<bool>(&v)) return *b;
      fault(loc, "logical value expected");
    case TypeKind::Character: {
      const auto* s = std::get_if<std::string>(&v);
      if (!s) fault(loc, "character value expected");
      std::string out = *s;
      out.resize((size_t)t.char_len, ' ');
      return out;
    }
    default:
      fault(loc, "untyped value");
  }
}

TracedValue to_traced(const Value& v, const Type& t) {
  switch (t.kind) {
    case TypeKind::Int: return TracedValue::of_int(std::get<int32_t>(v));
    case TypeKind::Real4: return TracedValue::of_real(std::get<float>(v), false);
    case TypeKind::Real8: return TracedValue::of_real(std::get<double>(v), true);
    case TypeKind::Logical: return TracedValue::of_logical(std::get<bool>(v));
    default: return TracedValue::of_char(std::get<std::string>(v));
  }
}

struct Slot {
  Type type;
  bool is_array = false;
  long lo = 1;
  std::vector<Value> data;  // scalars use data[0]

  Value& at(long idx, SourceLoc loc, const std::string& name) {
    long off = idx - lo;
    if (off < 0 || (size_t)off >= data.size())
      fault(loc, strf("index %ld out of bounds for '%s'", idx, name.c_str()));
    return data[(size_t)off];
  }
};

struct Frame {
  const Subprogram* sub = nullptr;
  std::map<std::string, Slot> vars;
  long start_site = -1;
  std::string start_name;
};

// Thrown when compare mode hits a sequence divergence or a record cap.
struct HaltRun {
  bool diverged;
};

enum class Flow { Normal, Returned };

class Interpreter {
 public:
  Interpreter(const SourceUnit& unit, const RunConfig& cfg)
      : unit_(unit), cfg_(cfg), rng_(cfg.env.uninit.seed) {}

  RunSummary execute() {
    if (!unit_.analyzed)
      throw Error(ErrorKind::Usage, "run needs an analyzed unit");
    const Subprogram* entry = find_entry();
    if (cfg_.mode == RunMode::Capture)
      capture_.emplace(cfg_.trace_path, cfg_.policy);
    else if (cfg_.mode == RunMode::Compare)
      compare_.emplace(cfg_.trace_path, cfg_.policy);

    for (const auto& sub : unit_.items)
      for (const auto& v : sub.read_before_write)
        summary_.uninit_warnings.push_back(
            strf("%s: '%s' may be read before it is written", sub.name.c_str(),
                 v.c_str()));

    try {
      Frame frame;
      frame.sub = entry;
      init_frame(frame, *entry);
      frames_.push_back(std::move(frame));
      exec_list(entry->body);
      pop_frame_with_return();
    } catch (HaltRun& h) {
      frames_.clear();
      if (!h.diverged) summary_.hit_record_cap = true;
    }

    if (cfg_.mode == RunMode::Capture) {
      summary_.records = capture_->records_written();
      capture_->close();
      summary_.exit_status = 0;
    } else if (cfg_.mode == RunMode::Compare) {
      summary_.report = compare_->finalize();
      if (summary_.hit_record_cap && summary_.report.divergence &&
          !summary_.report.divergence->reference_exhausted &&
          summary_.report.divergence->encountered_descriptor == "<end of run>") {
        // A capped run leaves the reference tail unread on purpose.
        summary_.report.divergence.reset();
      }
      summary_.records = compare_->records_compared();
      summary_.exit_status = summary_.report.exit_status();
    }
    return std::move(summary_);
  }

 private:
  const SourceUnit& unit_;
  const RunConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<Frame> frames_;
  std::optional<CaptureSession> capture_;
  std::optional<CompareSession> compare_;
  RunSummary summary_;

  const Subprogram* find_entry() {
    if (!cfg_.entry.empty()) {
      const Subprogram* s = unit_.find_item(to_lower(cfg_.entry));
      if (!s || s->kind != SubKind::Program)
        throw Error(ErrorKind::Usage,
                    strf("'%s' is not a PROGRAM in this unit", cfg_.entry.c_str()));
      return s;
    }
    const Subprogram* found = nullptr;
    for (const auto& s : unit_.items) {
      if (s.kind != SubKind::Program) continue;
      if (found)
        throw Error(ErrorKind::Usage,
                    "unit has several PROGRAMs; pick one as the entry");
      found = &s;
    }
    if (!found) throw Error(ErrorKind::Usage, "unit has no PROGRAM");
    return found;
  }

  Frame& frame() { return frames_.back(); }

  // -- uninitialized fill ----------------------------------------------------

  Value fill_value(const Type& t) {
    switch (cfg_.env.uninit.kind) {
      case UninitFill::Kind::Zero:
        switch (t.kind) {
          case TypeKind::Int: return (int32_t)0;
          case TypeKind::Real4: return 0.0f;
          case TypeKind::Real8: return 0.0;
          case TypeKind::Logical: return false;
          default: return std::string((size_t)t.char_len, ' ');
        }
      case UninitFill::Kind::SpacePattern:
        // Four (or eight) ASCII space bytes, reinterpreted per type.
        switch (t.kind) {
          case TypeKind::Int: return (int32_t)0x20202020;
          case TypeKind::Real4: return std::bit_cast<float>((uint32_t)0x20202020u);
          case TypeKind::Real8:
            return std::bit_cast<double>((uint64_t)0x2020202020202020ull);
          case TypeKind::Logical: return false;
          default: return std::string((size_t)t.char_len, ' ');
        }
      case UninitFill::Kind::Seeded:
        switch (t.kind) {
          case TypeKind::Int: return (int32_t)(uint32_t)rng_();
          case TypeKind::Real4: {
            std::uniform_real_distribution<float> d(-1.0e6f, 1.0e6f);
            return d(rng_);
          }
          case TypeKind::Real8: {
            std::uniform_real_distribution<double> d(-1.0e6, 1.0e6);
            return d(rng_);
          }
          case TypeKind::Logical: return (rng_() & 1) != 0;
          default: {
            std::string s((size_t)t.char_len, ' ');
            for (auto& c : s) c = (char)('a' + rng_() % 26);
            return s;
          }
        }
    }
    return (int32_t)0;
  }

  void init_slot(Slot& slot, const Decl& d) {
    slot.type = d.type;
    if (d.array) {
      slot.is_array = true;
      slot.lo = d.array->lo;
      slot.data.resize((size_t)(d.array->hi - d.array->lo + 1));
      for (auto& v : slot.data) v = fill_value(d.type);
    } else {
      slot.data.resize(1);
      slot.data[0] = fill_value(d.type);
    }
  }

  void init_frame(Frame& f, const Subprogram& sub) {
    for (const auto& d : sub.decls) {
      if (d.is_parameter) {
        Slot s;
        s.type = d.type;
        s.data.resize(1);
        s.data[0] = const_value(d);
        f.vars[d.name] = std::move(s);
        continue;
      }
      Slot s;
      init_slot(s, d);
      f.vars[d.name] = std::move(s);
    }
    if (sub.kind == SubKind::Function) {
      Slot s;
      s.type = sub.result_type;
      s.data.resize(1);
      s.data[0] = fill_value(sub.result_type);
      f.vars[sub.name] = std::move(s);
    }
  }

  Value const_value(const Decl& d) {
    // PARAMETER initializers were validated and folded by sema; re-fold the
    // simple literal/unary forms here.
    const Expr* e = d.init.get();
    double sign = 1.0;
    long long isign = 1;
    while (e->kind == Expr::Kind::Unary && e->un_op == UnOp::Neg) {
      sign = -sign;
      isign = -isign;
      e = e->args[0].get();
    }
    switch (d.type.kind) {
      case TypeKind::Int: return (int32_t)(isign * e->int_value);
      case TypeKind::Real4:
        return (float)(sign * (e->kind == Expr::Kind::IntLit ? (double)e->int_value
                                                             : e->real_value));
      case TypeKind::Real8:
        return sign * (e->kind == Expr::Kind::IntLit ? (double)e->int_value
                                                     : e->real_value);
      case TypeKind::Logical: return e->logical_value;
      default: {
        std::string s = e->char_value;
        s.resize((size_t)d.type.char_len, ' ');
        return s;
      }
    }
  }

  // -- storage access --------------------------------------------------------

  Slot& slot_of(const std::string& name, SourceLoc loc) {
    auto it = frame().vars.find(name);
    if (it == frame().vars.end())
      fault(loc, strf("no storage for '%s'", name.c_str()));
    return it->second;
  }

  Value read_lvalue(const Expr& e) {
    Slot& s = slot_of(e.name, e.loc);
    if (e.kind == Expr::Kind::ArrayElem) {
      long idx = expect_int(eval(*e.args[0]), e.loc);
      return s.at(idx, e.loc, e.name);
    }
    if (s.is_array) fault(e.loc, strf("array '%s' read without index", e.name.c_str()));
    return s.data[0];
  }

  void store_lvalue(const Expr& lhs, const Value& v) {
    Slot& s = slot_of(lhs.name, lhs.loc);
    Value stored = to_storage(v, s.type, lhs.loc);
    if (lhs.kind == Expr::Kind::ArrayElem) {
      long idx = expect_int(eval(*lhs.args[0]), lhs.loc);
      s.at(idx, lhs.loc, lhs.name) = stored;
    } else {
      s.data[0] = stored;
    }
  }

  static long expect_int(const Value& v, SourceLoc loc) {
    if (const auto* i = std::get_if<int32_t>(&v)) return *i;
    fault(loc, "integer expected");
  }

  // -- arithmetic ------------------------------------------------------------

  bool extended() const { return cfg_.env.precision == Precision::Extended; }

  Value real_result(long double v, TypeKind nominal) {
    if (extended()) return ExtReal{v, nominal};
    return nominal == TypeKind::Real4 ? Value((float)v) : Value((double)v);
  }

  Value num_add(const Value& a, const Value& b, TypeKind kind, SourceLoc loc) {
    if (kind == TypeKind::Int)
      return (int32_t)((int64_t)std::get<int32_t>(a) + std::get<int32_t>(b));
    if (extended()) return ExtReal{as_ld(a) + as_ld(b), kind};
    if (kind == TypeKind::Real4) return std::get<float>(a) + std::get<float>(b);
    return std::get<double>(a) + std::get<double>(b);
  }

  Value num_mul(const Value& a, const Value& b, TypeKind kind, SourceLoc loc) {
    if (kind == TypeKind::Int)
      return (int32_t)((int64_t)std::get<int32_t>(a) * std::get<int32_t>(b));
    if (extended()) return ExtReal{as_ld(a) * as_ld(b), kind};
    if (kind == TypeKind::Real4) return std::get<float>(a) * std::get<float>(b);
    return std::get<double>(a) * std::get<double>(b);
  }

  Value num_sub(const Value& a, const Value& b, TypeKind kind, SourceLoc loc) {
    if (kind == TypeKind::Int)
      return (int32_t)((int64_t)std::get<int32_t>(a) - std::get<int32_t>(b));
    if (extended()) return ExtReal{as_ld(a) - as_ld(b), kind};
    if (kind == TypeKind::Real4) return std::get<float>(a) - std::get<float>(b);
    return std::get<double>(a) - std::get<double>(b);
  }

  Value num_div(const Value& a, const Value& b, TypeKind kind, SourceLoc loc) {
    if (kind == TypeKind::Int) {
      int32_t d = std::get<int32_t>(b);
      if (d == 0) fault(loc, "integer division by zero");
      return (int32_t)(std::get<int32_t>(a) / d);
    }
    // Real division follows IEEE; a zero divisor yields Inf or NaN and the
    // trace format carries both.
    if (extended()) return ExtReal{as_ld(a) / as_ld(b), kind};
    if (kind == TypeKind::Real4) return std::get<float>(a) / std::get<float>(b);
    return std::get<double>(a) / std::get<double>(b);
  }

  Value num_pow(const Value& a, const Value& b, TypeKind kind, SourceLoc loc) {
    if (kind == TypeKind::Int) {
      int64_t base = std::get<int32_t>(a);
      int32_t exp = std::get<int32_t>(b);
      if (exp < 0) {
        if (base == 1) return (int32_t)1;
        if (base == -1) return (int32_t)((exp & 1) ? -1 : 1);
        if (base == 0) fault(loc, "0 ** negative exponent");
        return (int32_t)0;
      }
      int64_t r = 1;
      for (int32_t i = 0; i < exp; ++i) r *= base;
      return (int32_t)r;
    }
    long double base = as_ld(a);
    long double res;
    if (const auto* ie = std::get_if<int32_t>(&b)) {
      res = powl(base, (long double)*ie);
    } else {
      res = powl(base, as_ld(b));
    }
    return real_result(res, kind);
  }

  bool compare_bin(BinOp op, const Value& a, const Value& b, SourceLoc loc) {
    // Character equality compares with trailing-blank padding.
    if (const auto* sa = std::get_if<std::string>(&a)) {
      const auto* sb = std::get_if<std::string>(&b);
      std::string x = *sa, y = *sb;
      size_t n = std::max(x.size(), y.size());
      x.resize(n, ' ');
      y.resize(n, ' ');
      return op == BinOp::Eq ? x == y : x != y;
    }
    if (std::holds_alternative<int32_t>(a) && std::holds_alternative<int32_t>(b)) {
      int32_t x = std::get<int32_t>(a), y = std::get<int32_t>(b);
      switch (op) {
        case BinOp::Eq: return x == y;
        case BinOp::Ne: return x != y;
        case BinOp::Lt: return x < y;
        case BinOp::Le: return x <= y;
        case BinOp::Gt: return x > y;
        default: return x >= y;
      }
    }
    long double x = as_ld(a), y = as_ld(b);
    switch (op) {
      case BinOp::Eq: return x == y;
      case BinOp::Ne: return x != y;
      case BinOp::Lt: return x < y;
      case BinOp::Le: return x <= y;
      case BinOp::Gt: return x > y;
      default: return x >= y;
    }
    (void)loc;
  }

  // -- expression evaluation -------------------------------------------------

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::IntLit:
        return (int32_t)e.int_value;
      case Expr::Kind::RealLit:
        return e.type.kind == TypeKind::Real4 ? Value((float)e.real_value)
                                              : Value(e.real_value);
      case Expr::Kind::LogicalLit:
        return e.logical_value;
      case Expr::Kind::CharLit:
        return e.char_value;
      case Expr::Kind::Var:
      case Expr::Kind::ArrayElem:
        return read_lvalue(e);
      case Expr::Kind::Widen: {
        Value inner = eval(*e.args[0]);
        long v = expect_int(inner, e.loc);
        if (extended()) return ExtReal{(long double)v, e.type.kind};
        return e.type.kind == TypeKind::Real4 ? Value((float)v) : Value((double)v);
      }
      case Expr::Kind::Unary: {
        Value v = eval(*e.args[0]);
        if (e.un_op == UnOp::Not) return !std::get<bool>(v);
        if (const auto* i = std::get_if<int32_t>(&v)) return (int32_t)-*i;
        if (const auto* f = std::get_if<float>(&v)) return -*f;
        if (const auto* d = std::get_if<double>(&v)) return -*d;
        const auto& x = std::get<ExtReal>(v);
        return ExtReal{-x.v, x.nominal};
      }
      case Expr::Kind::Binary: {
        if (e.bin_op == BinOp::Eq || e.bin_op == BinOp::Ne ||
            e.bin_op == BinOp::Lt || e.bin_op == BinOp::Le ||
            e.bin_op == BinOp::Gt || e.bin_op == BinOp::Ge) {
          Value a = eval(*e.args[0]);
          Value b = eval(*e.args[1]);
          return compare_bin(e.bin_op, a, b, e.loc);
        }
        Value a = eval(*e.args[0]);
        Value b = eval(*e.args[1]);
        TypeKind k = e.type.kind;
        switch (e.bin_op) {
          case BinOp::Sub: return num_sub(a, b, k, e.loc);
          case BinOp::Div: return num_div(a, b, k, e.loc);
          default: return num_pow(a, b, k, e.loc);
        }
      }
      case Expr::Kind::Nary:
        return eval_nary(e);
      case Expr::Kind::CallFn:
        return call_function(e);
    }
    fault(e.loc, "unreachable expression kind");
  }

  // Flat +/* chains: operands evaluate in written order (so traced side
  // effects are order-independent), then fold per the configured order.
  Value eval_nary(const Expr& e) {
    if (e.nary_op == NaryOp::And || e.nary_op == NaryOp::Or)
      return eval_shortcircuit(e);

    std::vector<Value> ops;
    ops.reserve(e.args.size());
    for (const auto& a : e.args) ops.push_back(eval(*a));
    TypeKind k = e.type.kind;
    auto combine = [&](const Value& a, const Value& b) {
      return e.nary_op == NaryOp::Add ? num_add(a, b, k, e.loc)
                                      : num_mul(a, b, k, e.loc);
    };
    switch (cfg_.env.assoc) {
      case AssocOrder::LeftToRight: {
        Value acc = ops[0];
        for (size_t i = 1; i < ops.size(); ++i) acc = combine(acc, ops[i]);
        return acc;
      }
      case AssocOrder::RightToLeft: {
        Value acc = ops.back();
        for (size_t i = ops.size() - 1; i-- > 0;) acc = combine(ops[i], acc);
        return acc;
      }
      case AssocOrder::PairwiseTree:
        return pairwise(ops, 0, ops.size(), combine);
    }
    return ops[0];
  }

  template <class F>
  Value pairwise(const std::vector<Value>& ops, size_t lo, size_t hi, F&& combine) {
    size_t n = hi - lo;
    if (n == 1) return ops[lo];
    // Balanced binary, left-biased for odd counts.
    size_t mid = lo + (n + 1) / 2;
    Value a = pairwise(ops, lo, mid, combine);
    Value b = pairwise(ops, mid, hi, combine);
    return combine(a, b);
  }

  // First decisive operand wins; the evaluation order decides which operands
  // (and their traced calls) run at all.
  Value eval_shortcircuit(const Expr& e) {
    bool want = e.nary_op == NaryOp::Or;  // decisive value
    size_t n = e.args.size();
    for (size_t i = 0; i < n; ++i) {
      size_t idx = cfg_.env.shortcircuit == ShortCircuitOrder::AsWritten
                       ? i
                       : n - 1 - i;
      bool v = std::get<bool>(eval(*e.args[idx]));
      if (v == want) return want;
    }
    return !want;
  }

  // -- calls -----------------------------------------------------------------

  Value call_function(const Expr& e) {
    const Subprogram* fn = unit_.find_item(e.name);
    if (!fn) fault(e.loc, strf("unknown function '%s'", e.name.c_str()));
    Frame f;
    f.sub = fn;
    init_frame(f, *fn);
    // Function arguments are INTENT(IN); scalars copy in, arrays alias by copy.
    for (size_t i = 0; i < e.args.size(); ++i) {
      const Decl* p = fn->find_decl(fn->params[i]);
      if (p->array) {
        Slot src = slot_of(e.args[i]->name, e.args[i]->loc);
        f.vars[p->name] = std::move(src);
      } else {
        Value v = eval(*e.args[i]);
        f.vars[p->name].data[0] = to_storage(v, p->type, e.args[i]->loc);
      }
    }
    frames_.push_back(std::move(f));
    exec_list(fn->body);
    Value result = frame().vars[fn->name].data[0];
    pop_frame_with_return();
    return result;
  }

  void exec_call(const Stmt& s, const CallStmt& c) {
    const Subprogram* sub = unit_.find_item(c.name);
    if (!sub || sub->kind != SubKind::Subroutine)
      fault(s.loc, strf("unknown subroutine '%s'", c.name.c_str()));
    Frame f;
    f.sub = sub;
    init_frame(f, *sub);
    // Copy-in.
    for (size_t i = 0; i < c.args.size(); ++i) {
      const Decl* p = sub->find_decl(sub->params[i]);
      const Expr& a = *c.args[i];
      if (p->array) {
        if (p->intent != Intent::Out)
          f.vars[p->name].data = slot_of(a.name, a.loc).data;
        continue;
      }
      if (p->intent == Intent::Out) continue;  // fresh (uninit-filled) slot
      Value v = eval(a);
      f.vars[p->name].data[0] = to_storage(v, p->type, a.loc);
    }
    frames_.push_back(std::move(f));
    exec_list(sub->body);
    Frame done = std::move(frames_.back());
    emit_return_marker(done);
    frames_.pop_back();
    // Copy-out.
    for (size_t i = 0; i < c.args.size(); ++i) {
      const Decl* p = sub->find_decl(sub->params[i]);
      if (p->intent == Intent::In) continue;
      const Expr& a = *c.args[i];
      Slot& res = done.vars[p->name];
      if (p->array) {
        slot_of(a.name, a.loc).data = res.data;
      } else {
        store_lvalue(a, res.data[0]);
      }
    }
  }

  // -- trace plumbing --------------------------------------------------------

  void check_record_cap(long emitted) {
    if (cfg_.max_records && emitted >= *cfg_.max_records) throw HaltRun{false};
  }

  void trace_start(const Stmt& s, const CallStmt& c) {
    const std::string& name = c.args[0]->char_value;
    long site = (long)c.args[1]->int_value;
    frame().start_site = site;
    frame().start_name = name;
    summary_.executed_sites.insert(site);
    if (cfg_.mode == RunMode::Capture) {
      capture_->record(RecKind::Start, site, name, nullptr);
      check_record_cap(capture_->records_written());
    } else if (cfg_.mode == RunMode::Compare) {
      if (compare_->compare_marker(RecKind::Start, site, name) ==
          Outcome::SequenceDivergence)
        throw HaltRun{true};
      check_record_cap(compare_->records_compared());
    }
    (void)s;
  }

  void emit_return_marker(const Frame& f) {
    if (f.start_site < 0) return;
    if (cfg_.mode == RunMode::Capture) {
      capture_->record(RecKind::Return, f.start_site, f.start_name, nullptr);
      check_record_cap(capture_->records_written());
    } else if (cfg_.mode == RunMode::Compare) {
      if (compare_->compare_marker(RecKind::Return, f.start_site, f.start_name) ==
          Outcome::SequenceDivergence)
        throw HaltRun{true};
      check_record_cap(compare_->records_compared());
    }
  }

  void trace_data(const Stmt& s, const CallStmt& c) {
    const std::string& descriptor = c.args[0]->char_value;
    const Expr& lvalue = *c.args[1];
    long site = (long)c.args[2]->int_value;
    summary_.executed_sites.insert(site);
    if (cfg_.mode == RunMode::Plain) return;
    Type t = lvalue.type;
    if (t.kind == TypeKind::Character && !cfg_.policy.compare_characters)
      return;  // suppressed; seq must not advance
    Value v = read_lvalue(lvalue);
    TracedValue tv = to_traced(v, t);
    if (cfg_.mode == RunMode::Capture) {
      capture_->record(RecKind::Data, site, descriptor, &tv);
      check_record_cap(capture_->records_written());
      return;
    }
    CompareResult res = compare_->compare(RecKind::Data, site, descriptor, tv);
    if (res.outcome == Outcome::SequenceDivergence) throw HaltRun{true};
    if (res.outcome == Outcome::Similar || res.outcome == Outcome::Different) {
      // Drift removal: continue the run with the reference value.
      Value ref;
      const TracedValue& r = res.reference;
      if (r.typecode == "i4") ref = (int32_t)r.i;
      else if (r.typecode == "r4") ref = (float)r.r;
      else if (r.typecode == "r8") ref = r.r;
      else if (r.typecode == "l4") ref = r.l;
      else ref = r.ch;
      store_lvalue(lvalue, ref);
    }
    check_record_cap(compare_->records_compared());
    (void)s;
  }

  // -- statement execution ---------------------------------------------------

  Flow exec_list(const StmtList& body) {
    for (const auto& s : body) {
      Flow f = exec_stmt(*s);
      if (f == Flow::Returned) return f;
    }
    return Flow::Normal;
  }

  Flow exec_stmt(const Stmt& s) {
    if (const auto* a = s.as<AssignStmt>()) {
      Value v = eval(*a->rhs);
      store_lvalue(*a->lhs, v);
      return Flow::Normal;
    }
    if (const auto* d = s.as<DoStmt>()) {
      long from = expect_int(eval(*d->from), s.loc);
      long to = expect_int(eval(*d->to), s.loc);
      long step = d->step ? expect_int(eval(*d->step), s.loc) : 1;
      if (step == 0) fault(s.loc, "DO step must not be zero");
      Slot& var = slot_of(d->var, s.loc);
      for (long i = from; step > 0 ? i <= to : i >= to; i += step) {
        var.data[0] = (int32_t)i;
        Flow f = exec_list(d->body);
        if (f == Flow::Returned) return f;
      }
      return Flow::Normal;
    }
    if (const auto* f = s.as<IfStmt>()) {
      for (const auto& br : f->branches) {
        if (std::get<bool>(eval(*br.cond))) return exec_list(br.body);
      }
      return exec_list(f->else_body);
    }
    if (const auto* c = s.as<CallStmt>()) {
      if (c->name == "trace_start_sub_program") {
        trace_start(s, *c);
      } else if (is_trace_call_name(c->name)) {
        trace_data(s, *c);
      } else {
        exec_call(s, *c);
      }
      return Flow::Normal;
    }
    if (s.as<ReturnStmt>()) return Flow::Returned;
    if (const auto* p = s.as<PrintStmt>()) {
      std::ostringstream os;
      for (size_t i = 0; i < p->items.size(); ++i) {
        if (i) os << ' ';
        Value v = eval(*p->items[i]);
        os << to_traced(to_storage(v, p->items[i]->type, s.loc),
                        p->items[i]->type)
                  .canonical();
      }
      summary_.printed.push_back(os.str());
      return Flow::Normal;
    }
    return Flow::Normal;  // comments
  }

  void pop_frame_with_return() {
    Frame done = std::move(frames_.back());
    emit_return_marker(done);
    frames_.pop_back();
    if (frames_.empty()) record_finals(done);
  }

  void record_finals(const Frame& f) {
    for (const auto& [name, slot] : f.vars) {
      std::string text;
      for (size_t i = 0; i < slot.data.size(); ++i) {
        if (i) text += ",";
        text += to_traced(slot.data[i], slot.type).canonical();
      }
      summary_.finals[name] = text;
    }
  }
};

}  // namespace

RunSummary run(const SourceUnit& unit, const RunConfig& cfg) {
  Interpreter in(unit, cfg);
  return in.execute();
}

}  // namespace driftlens
