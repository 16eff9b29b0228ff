#include <chrono>
#include <functional>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "internal.hpp"
#include "snipfit/frontend/analyzer.hpp"
#include "snipfit/frontend/parser.hpp"
#include "snipfit/frontend/resolver.hpp"
#include "snipfit/runtime/sandbox.hpp"

namespace snipfit::runtime {

using frontend::BaseType;
using frontend::ClassDecl;
using frontend::Expr;
using frontend::ExprKind;
using frontend::LibMethod;
using frontend::MethodDecl;
using frontend::Stmt;
using frontend::StmtKind;
using frontend::Type;

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::passed: return "passed";
    case RunStatus::failed: return "failed";
    case RunStatus::runtime_error: return "runtime_error";
    case RunStatus::timeout: return "timeout";
    case RunStatus::compile_error: return "compile_error";
  }
  return "runtime_error";
}

std::string test_program(std::string_view imports, std::string_view function_source, std::string_view test_source) {
  std::string out(imports);
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += "public class SnippetTest {\n";
  out += function_source;
  if (!function_source.empty() && function_source.back() != '\n') out += '\n';
  out += test_source;
  if (!test_source.empty() && test_source.back() != '\n') out += '\n';
  out += "}\n";
  return out;
}

namespace {

using detail::BudgetExceeded;
using detail::Fault;
using detail::JavaThrow;

using Clock = std::chrono::steady_clock;

enum class Flow { normal, brk, cont, ret };

struct Slot {
  Value value;
  Type type;  // declared type; unknown skips coercion
};

// Whether a runtime value may be passed where static type `t` is expected.
bool value_fits(const Type& t, const Value& v) {
  if (t.is_unknown()) return true;
  if (is_null(v)) return t.is_reference();
  if (t.dims > 0) {
    const auto* a = std::get_if<ArrayRef>(&v);
    if (!a) return false;
    const Type& e = (*a)->elem;
    const Type want = t.element();
    return want.is_unknown() || e == want || (want.is_reference() && e.is_reference() && want.dims == e.dims);
  }
  switch (t.base) {
    case BaseType::int_:
      return std::holds_alternative<std::int32_t>(v) || std::holds_alternative<char>(v);
    case BaseType::long_:
      return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<std::int32_t>(v) ||
             std::holds_alternative<char>(v);
    case BaseType::float_:
      return is_numeric(v) && !std::holds_alternative<double>(v);
    case BaseType::double_: return is_numeric(v);
    case BaseType::char_: return std::holds_alternative<char>(v);
    case BaseType::boolean_: return std::holds_alternative<bool>(v);
    case BaseType::string_: return std::holds_alternative<std::string>(v);
    case BaseType::class_: {
      if (t.cls == "java.lang.Object") return true;
      if (const auto* o = std::get_if<ObjectRef>(&v)) return frontend::library_is_subclass((*o)->cls, t.cls);
      if (std::holds_alternative<std::string>(v)) return t.cls == "java.lang.CharSequence";
      return false;
    }
    default: return true;
  }
}

bool spec_accepts(const std::string& spec, const Value& v) {
  if (spec == "any") return true;
  if (spec == "num") return is_numeric(v);
  if (spec == "array") return is_null(v) || std::holds_alternative<ArrayRef>(v);
  if (spec == "char|String") {
    return std::holds_alternative<char>(v) || std::holds_alternative<std::string>(v) ||
           std::holds_alternative<std::int32_t>(v);
  }
  return value_fits(frontend::spec_type(spec), v);
}

std::string owner_of(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return "java.lang.String";
  if (const auto* o = std::get_if<ObjectRef>(&v)) return (*o)->cls;
  return frontend::member_owner(type_of(v));
}

bool is_void(const frontend::TypeRef& t) { return t.name == "void" && t.dims == 0; }

class Interpreter final : public detail::BuiltinContext {
 public:
  Interpreter(const frontend::CompilationUnit& tree, const Budget& budget, const frontend::TypeRegistry& registry)
      : tree_(tree),
        budget_(budget),
        resolver_(tree, registry),
        lib_(frontend::Library::standard()),
        start_(Clock::now()),
        random_(detail::random_seed(42)) {
    for (const auto& c : tree_.classes) index_class(c, nullptr);
  }

  RunOutcome run(const std::function<Value()>& body) {
    RunOutcome out;
    try {
      for (const auto& c : tree_.classes) init_statics(c);
      out.result = body();
      out.status = RunStatus::passed;
    } catch (const JavaThrow& t) {
      const auto& exc = std::get<ObjectRef>(t.exc);
      if (frontend::library_is_subclass(exc->cls, "java.lang.AssertionError")) {
        out.status = RunStatus::failed;
        out.detail = exc->has_text ? exc->text : "assertion failed";
      } else {
        out.status = RunStatus::runtime_error;
        out.detail = to_java_string(t.exc);
      }
    } catch (const BudgetExceeded&) {
      out.status = RunStatus::timeout;
      out.detail = cancelled_ ? "cancelled" : (steps_ >= budget_.max_steps ? "step budget exhausted"
                                                                            : "wall-clock budget exhausted");
    } catch (const Fault& f) {
      out.status = RunStatus::runtime_error;
      out.detail = f.message;
    }
    out.steps = steps_;
    out.output = std::move(output_);
    out.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    return out;
  }

  const MethodDecl* find_method(std::string_view name, const ClassDecl** owner) const {
    for (const auto& c : tree_.classes) {
      if (const auto* m = find_in(c, name, owner)) return m;
    }
    return nullptr;
  }

  const MethodDecl* find_test_method(const ClassDecl** owner) const {
    for (const auto& c : tree_.classes) {
      if (c.name != "SnippetTest") continue;
      for (const auto& m : c.methods) {
        for (const auto& a : m.annotations) {
          if (a == "Test") {
            *owner = &c;
            return &m;
          }
        }
      }
      for (const auto& m : c.methods) {
        if (m.name.rfind("test", 0) == 0 && m.params.empty()) {
          *owner = &c;
          return &m;
        }
      }
    }
    return nullptr;
  }

  Value call_user(const ClassDecl& cls, const MethodDecl& m, std::vector<Value> args) {
    if (!m.body) throw Fault{"method " + m.name + " has no body"};
    if (depth_ >= kMaxCallDepth) raise("java.lang.StackOverflowError", "");
    tick();
    ++depth_;
    struct DepthGuard {
      int& d;
      std::vector<std::vector<std::unordered_map<std::string, Slot>>>& stack;
      ~DepthGuard() {
        --d;
        stack.pop_back();
      }
    };
    frames_.emplace_back();
    frames_.back().emplace_back();
    class_stack_.push_back(&cls);
    DepthGuard guard{depth_, frames_};
    struct ClassGuard {
      std::vector<const ClassDecl*>& s;
      ~ClassGuard() { s.pop_back(); }
    } cguard{class_stack_};
    for (std::size_t i = 0; i < m.params.size() && i < args.size(); ++i) {
      const Type t = resolve(m.params[i].type);
      locals().back()[m.params[i].name] = Slot{coerce(args[i], t), t};
    }
    const Flow f = exec(*m.body);
    if (is_void(m.ret)) return std::monostate{};
    if (f != Flow::ret) throw Fault{"method " + m.name + " ended without returning a value"};
    Value r = std::move(ret_value_);
    ret_value_ = std::monostate{};
    return coerce(r, resolve(m.ret));
  }

  // ---- BuiltinContext ---------------------------------------------------------

  [[noreturn]] void raise(std::string_view cls, std::string message) override {
    auto o = new_object(std::string(cls));
    if (!message.empty() || cls == "java.lang.ArithmeticException") {
      o->text = std::move(message);
      o->has_text = true;
    }
    throw JavaThrow{Value{o}};
  }

  void charge(std::uint64_t steps) override {
    steps_ += steps;
    if (steps_ >= budget_.max_steps) throw BudgetExceeded{};
    check_clock();
  }

  void write(std::string_view text) override {
    const auto room = budget_.max_output > output_.size() ? budget_.max_output - output_.size() : 0;
    output_.append(text.substr(0, std::min(room, text.size())));
  }

  ObjectRef new_object(std::string cls) override {
    auto o = std::make_shared<Object>();
    o->cls = std::move(cls);
    o->id = next_id_++;
    return o;
  }

  ArrayRef new_array(Type elem, std::size_t n) override {
    if (n > detail::kMaxAllocation) raise("java.lang.OutOfMemoryError", "Java heap space");
    charge(1 + n / 64);
    auto a = std::make_shared<ArrayObj>();
    a->items.assign(n, default_value(elem));
    a->elem = std::move(elem);
    a->id = next_id_++;
    return a;
  }

  std::uint64_t& random_state() override { return random_; }

  std::int64_t millis() override { return 1'700'000'000'000LL + static_cast<std::int64_t>(steps_ / 1000); }

 private:
  using Frame = std::unordered_map<std::string, Slot>;

  // ---- setup --------------------------------------------------------------------

  void index_class(const ClassDecl& c, const ClassDecl* parent) {
    parent_[&c] = parent;
    for (const auto& m : c.methods) method_class_[&m] = &c;
    for (const auto& n : c.classes) index_class(n, &c);
  }

  static const MethodDecl* find_in(const ClassDecl& c, std::string_view name, const ClassDecl** owner) {
    for (const auto& m : c.methods) {
      if (m.name == name) {
        *owner = &c;
        return &m;
      }
    }
    for (const auto& n : c.classes) {
      if (const auto* m = find_in(n, name, owner)) return m;
    }
    return nullptr;
  }

  void init_statics(const ClassDecl& c) {
    auto& fm = statics_[&c];
    for (const auto& f : c.fields) {
      const Type base = resolve(f.type);
      for (const auto& d : f.decls) {
        Type t = base;
        if (!t.is_unknown()) t.dims += d.extra_dims;
        fm[d.name] = Slot{default_value(t), t};
      }
    }
    frames_.emplace_back();
    frames_.back().emplace_back();
    class_stack_.push_back(&c);
    for (const auto& f : c.fields) {
      for (const auto& d : f.decls) {
        if (!d.init) continue;
        auto& slot = fm[d.name];
        slot.value = coerce(init_value(*d.init, slot.type), slot.type);
      }
    }
    class_stack_.pop_back();
    frames_.pop_back();
    for (const auto& n : c.classes) init_statics(n);
  }

  Type resolve(const frontend::TypeRef& ref) const {
    if (is_void(ref)) return Type::of(BaseType::void_);
    return resolver_.resolve(ref).value_or(Type::unknown());
  }

  // ---- budget -------------------------------------------------------------------

  void tick() {
    if (++steps_ >= budget_.max_steps) throw BudgetExceeded{};
    if ((steps_ & 1023) == 0) check_clock();
  }

  void check_clock() {
    if (budget_.cancel && budget_.cancel->load(std::memory_order_relaxed)) {
      cancelled_ = true;
      throw BudgetExceeded{};
    }
    if (Clock::now() - start_ >= budget_.wall) throw BudgetExceeded{};
  }

  // ---- variables ------------------------------------------------------------------

  std::vector<Frame>& locals() { return frames_.back(); }

  Slot* find_local(const std::string& name) {
    auto& fs = locals();
    for (auto it = fs.rbegin(); it != fs.rend(); ++it) {
      if (const auto f = it->find(name); f != it->end()) return &f->second;
    }
    return nullptr;
  }

  Slot* find_field(const std::string& name) {
    for (const ClassDecl* c = class_stack_.empty() ? nullptr : class_stack_.back(); c; c = parent_.at(c)) {
      auto& fm = statics_[c];
      if (const auto f = fm.find(name); f != fm.end()) return &f->second;
    }
    return nullptr;
  }

  Slot* find_var(const std::string& name) {
    if (Slot* s = find_local(name)) return s;
    return find_field(name);
  }

  void declare(const std::string& name, Value v, const Type& t) { locals().back()[name] = Slot{std::move(v), t}; }

  struct Scope {
    Interpreter& in;
    explicit Scope(Interpreter& i) : in(i) { in.locals().emplace_back(); }
    ~Scope() { in.locals().pop_back(); }
  };

  // ---- statements -------------------------------------------------------------------

  Flow exec(const Stmt& s) {
    tick();
    switch (s.kind) {
      case StmtKind::block: {
        Scope sc(*this);
        for (const auto& c : s.body) {
          const Flow f = exec(*c);
          if (f != Flow::normal) return f;
        }
        return Flow::normal;
      }
      case StmtKind::local_var: {
        const Type base = resolve(s.type);
        for (const auto& d : s.decls) {
          Type t = base;
          if (!t.is_unknown()) t.dims += d.extra_dims;
          Value v = d.init ? coerce(init_value(*d.init, t), t) : default_value(t);
          declare(d.name, std::move(v), t);
        }
        return Flow::normal;
      }
      case StmtKind::expr:
        if (s.expr) eval(*s.expr);
        return Flow::normal;
      case StmtKind::if_: {
        if (truthy(eval(*s.expr))) return s.then_branch ? scoped(*s.then_branch) : Flow::normal;
        return s.else_branch ? scoped(*s.else_branch) : Flow::normal;
      }
      case StmtKind::while_: {
        while (truthy(eval(*s.expr))) {
          const Flow f = s.then_branch ? scoped(*s.then_branch) : Flow::normal;
          if (f == Flow::brk) break;
          if (f == Flow::ret) return f;
          tick();
        }
        return Flow::normal;
      }
      case StmtKind::for_: {
        Scope sc(*this);
        for (const auto& init : s.body) exec(*init);
        while (!s.expr || truthy(eval(*s.expr))) {
          const Flow f = s.then_branch ? scoped(*s.then_branch) : Flow::normal;
          if (f == Flow::brk) break;
          if (f == Flow::ret) return f;
          for (const auto& u : s.update) eval(*u);
          tick();
        }
        return Flow::normal;
      }
      case StmtKind::for_each: {
        const Value it = eval(*s.expr);
        const Type var = resolve(s.type);
        const auto body = [&](const Value& v) {
          Scope sc(*this);
          declare(s.text, coerce(v, var), var);
          return s.then_branch ? exec(*s.then_branch) : Flow::normal;
        };
        if (is_null(it)) raise("java.lang.NullPointerException", "");
        if (const auto* a = std::get_if<ArrayRef>(&it)) {
          const ArrayRef arr = *a;
          for (std::size_t i = 0; i < arr->items.size(); ++i) {
            const Flow f = body(arr->items[i]);
            if (f == Flow::brk) break;
            if (f == Flow::ret) return f;
          }
        } else if (const auto* o = std::get_if<ObjectRef>(&it)) {
          const ObjectRef obj = *o;
          for (std::size_t i = 0; i < obj->items.size(); ++i) {
            const Flow f = body(obj->items[i]);
            if (f == Flow::brk) break;
            if (f == Flow::ret) return f;
          }
        } else {
          throw Fault{"cannot iterate over " + type_of(it).to_string()};
        }
        return Flow::normal;
      }
      case StmtKind::return_:
        ret_value_ = s.expr ? eval(*s.expr) : Value{};
        return Flow::ret;
      case StmtKind::break_: return Flow::brk;
      case StmtKind::continue_: return Flow::cont;
      case StmtKind::throw_: {
        Value v = eval(*s.expr);
        if (is_null(v)) raise("java.lang.NullPointerException", "");
        if (!std::holds_alternative<ObjectRef>(v)) throw Fault{"only throwable objects can be thrown"};
        throw JavaThrow{std::move(v)};
      }
      case StmtKind::try_: return exec_try(s);
      case StmtKind::empty:
      case StmtKind::nested_class: return Flow::normal;
      case StmtKind::nested_method:
      case StmtKind::misplaced_import:
      case StmtKind::error: throw Fault{"statement cannot be executed"};
    }
    return Flow::normal;
  }

  Flow scoped(const Stmt& s) {
    Scope sc(*this);
    return exec(s);
  }

  Flow exec_try(const Stmt& s) {
    Flow flow = Flow::normal;
    std::optional<JavaThrow> pending;
    const auto saved_depth = locals().size();
    try {
      flow = s.then_branch ? exec(*s.then_branch) : Flow::normal;
    } catch (JavaThrow& t) {
      locals().resize(saved_depth);
      const auto& exc = std::get<ObjectRef>(t.exc);
      const frontend::CatchClause* handler = nullptr;
      for (const auto& c : s.catches) {
        const Type ct = resolve(c.type);
        if (ct.is_unknown() || (ct.base == BaseType::class_ && frontend::library_is_subclass(exc->cls, ct.cls))) {
          handler = &c;
          break;
        }
      }
      if (handler) {
        try {
          Scope sc(*this);
          declare(handler->name, t.exc, resolve(handler->type));
          flow = handler->body ? exec(*handler->body) : Flow::normal;
        } catch (JavaThrow& inner) {
          locals().resize(saved_depth);
          pending = std::move(inner);
        }
      } else {
        pending = std::move(t);
      }
    }
    if (s.else_branch) {
      Value saved = ret_value_;
      const Flow fin = exec(*s.else_branch);
      if (fin != Flow::normal) return fin;  // abrupt finally discards the pending outcome
      ret_value_ = std::move(saved);
    }
    if (pending) throw std::move(*pending);
    return flow;
  }

  // ---- expressions ----------------------------------------------------------------------

  static bool truthy(const Value& v) {
    if (const auto* b = std::get_if<bool>(&v)) return *b;
    throw Fault{"condition is not a boolean"};
  }

  Value init_value(const Expr& e, const Type& t) {
    if (e.kind == ExprKind::array_init && e.type.empty()) return array_literal(e, t);
    return eval(e);
  }

  Value array_literal(const Expr& e, const Type& t) {
    if (t.is_unknown() || !t.is_array()) throw Fault{"array initializer without an array type"};
    const Type elem = t.element();
    auto arr = new_array(elem, e.args.size());
    for (std::size_t i = 0; i < e.args.size(); ++i) {
      const Expr& a = *e.args[i];
      arr->items[i] = a.kind == ExprKind::array_init && a.type.empty() ? array_literal(a, elem)
                                                                        : coerce(eval(a), elem);
    }
    return arr;
  }

  Value eval(const Expr& e) {
    tick();
    switch (e.kind) {
      case ExprKind::literal: return literal(e);
      case ExprKind::name: {
        if (Slot* s = find_var(e.text)) return s->value;
        throw Fault{"unknown variable " + e.text};
      }
      case ExprKind::field_access: return field_access(e);
      case ExprKind::call: return call(e);
      case ExprKind::index: {
        Value arr = eval(*e.args[0]);
        const Value idx = eval(*e.args[1]);
        return *element(arr, idx);
      }
      case ExprKind::unary: return unary(e);
      case ExprKind::postfix: {
        Type t;
        ArrayRef pin;
        Value* slot = lvalue(*e.args[0], &t, &pin);
        Value old = *slot;
        *slot = step(old, e.text == "++" ? 1 : -1);
        return old;
      }
      case ExprKind::binary: return binary(e);
      case ExprKind::assign: return assign(e);
      case ExprKind::ternary: return truthy(eval(*e.args[0])) ? eval(*e.args[1]) : eval(*e.args[2]);
      case ExprKind::cast: return cast(resolve(e.type), eval(*e.args[0]));
      case ExprKind::new_array: {
        frontend::TypeRef base = e.type;
        base.dims = 0;
        const Type elem = resolve(base);
        if (elem.is_unknown()) throw Fault{"unknown array element type " + e.type.name};
        std::vector<std::int64_t> sizes;
        for (const auto& a : e.args) sizes.push_back(as_long(eval(*a)));
        for (auto n : sizes) {
          if (n < 0) raise("java.lang.NegativeArraySizeException", std::to_string(n));
        }
        return make_array(elem, e.type.dims, sizes, 0);
      }
      case ExprKind::array_init: {
        if (e.type.empty()) throw Fault{"array initializer without an array type"};
        return array_literal(e, resolve(e.type));
      }
      case ExprKind::new_object: return new_object_expr(e);
      case ExprKind::error: throw Fault{"expression cannot be executed"};
    }
    throw Fault{"expression cannot be executed"};
  }

  Value make_array(const Type& base, int dims, const std::vector<std::int64_t>& sizes, std::size_t level) {
    Type elem = base;
    elem.dims = dims - 1 - static_cast<int>(level);
    auto arr = new_array(elem, static_cast<std::size_t>(sizes[level]));
    if (level + 1 < sizes.size()) {
      for (auto& item : arr->items) item = make_array(base, dims, sizes, level + 1);
    }
    return arr;
  }

  static Value literal(const Expr& e) {
    switch (e.lit) {
      case frontend::LitKind::int_:
        return static_cast<std::int32_t>(static_cast<std::uint32_t>(std::stoull(e.value.empty() ? "0" : e.value)));
      case frontend::LitKind::long_: {
        const auto& v = e.value;
        if (!v.empty() && v[0] == '-') return static_cast<std::int64_t>(std::stoll(v));
        return static_cast<std::int64_t>(std::stoull(v.empty() ? "0" : v));
      }
      case frontend::LitKind::float_: return std::stof(e.value);
      case frontend::LitKind::double_: return std::stod(e.value);
      case frontend::LitKind::char_: return e.value.empty() ? '\0' : e.value[0];
      case frontend::LitKind::string_: return e.value;
      case frontend::LitKind::bool_: return e.value == "true";
      case frontend::LitKind::null_: return std::monostate{};
    }
    return std::monostate{};
  }

  Value* element(Value& arr, const Value& idx) {
    if (is_null(arr)) raise("java.lang.NullPointerException", "");
    auto* a = std::get_if<ArrayRef>(&arr);
    if (!a) throw Fault{"indexing a non-array value"};
    const auto i = as_long(idx);
    if (i < 0 || static_cast<std::size_t>(i) >= (*a)->items.size()) {
      raise("java.lang.ArrayIndexOutOfBoundsException",
            "Index " + std::to_string(i) + " out of bounds for length " + std::to_string((*a)->items.size()));
    }
    return &(*a)->items[static_cast<std::size_t>(i)];
  }

  // Storage for an assignable expression; `type` receives the slot's declared type.
  Value* lvalue(const Expr& e, Type* type, ArrayRef* pin) {
    switch (e.kind) {
      case ExprKind::name: {
        Slot* s = find_var(e.text);
        if (!s) throw Fault{"unknown variable " + e.text};
        *type = s->type;
        return &s->value;
      }
      case ExprKind::index: {
        Value arr = eval(*e.args[0]);
        const Value idx = eval(*e.args[1]);
        Value* slot = element(arr, idx);
        *pin = std::get<ArrayRef>(arr);
        *type = (*pin)->elem;
        return slot;
      }
      case ExprKind::field_access: {
        if (auto tn = type_target(*e.target); tn && tn->user) {
          auto& fm = statics_[resolver_.user_class(tn->owner)];
          if (const auto f = fm.find(e.text); f != fm.end()) {
            *type = f->second.type;
            return &f->second.value;
          }
        }
        break;
      }
      default: break;
    }
    throw Fault{"expression is not assignable"};
  }

  Value assign(const Expr& e) {
    Type t;
    const Expr& lhs = *e.args[0];
    const Expr& rhs = *e.args[1];
    if (e.text == "=") {
      // Java evaluates the array and index before the right-hand side. Slots
      // stay valid meanwhile: frames are node-based maps and `pin` keeps the
      // array alive.
      ArrayRef pin;
      Value* slot = lvalue(lhs, &t, &pin);
      Value v = rhs.kind == ExprKind::array_init && rhs.type.empty() ? array_literal(rhs, t) : eval(rhs);
      if (lhs.kind == ExprKind::index && !is_null(v) && !value_fits(t, v) && t.is_reference() && t.dims == 0 &&
          t.base == BaseType::class_) {
        raise("java.lang.ArrayStoreException", type_of(v).to_string());
      }
      *slot = coerce(v, t);
      return *slot;
    }
    ArrayRef pin;
    Value* slot = lvalue(lhs, &t, &pin);
    const Value cur = *slot;
    const Value r = eval(rhs);
    const std::string op = e.text.substr(0, e.text.size() - 1);
    Value result = arith(op, cur, r);
    *slot = coerce(result, t.is_unknown() ? type_of(cur) : t);
    return *slot;
  }

  Value step(const Value& v, int delta) {
    const Value r = arith(delta > 0 ? "+" : "-", v, std::int32_t{1});
    return coerce(r, type_of(v));
  }

  Value unary(const Expr& e) {
    const auto& op = e.text;
    if (op == "++" || op == "--") {
      Type t;
      ArrayRef pin;
      Value* slot = lvalue(*e.args[0], &t, &pin);
      *slot = step(*slot, op == "++" ? 1 : -1);
      return *slot;
    }
    const Value v = eval(*e.args[0]);
    if (op == "!") return !truthy(v);
    if (op == "+") return promote_unary(v);
    if (op == "-") {
      const Value p = promote_unary(v);
      if (const auto* i = std::get_if<std::int32_t>(&p)) {
        return static_cast<std::int32_t>(0U - static_cast<std::uint32_t>(*i));
      }
      if (const auto* l = std::get_if<std::int64_t>(&p)) {
        return static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(*l));
      }
      if (const auto* f = std::get_if<float>(&p)) return -*f;
      return -as_double(p);
    }
    if (op == "~") {
      const Value p = promote_unary(v);
      if (const auto* l = std::get_if<std::int64_t>(&p)) return ~*l;
      return ~std::get<std::int32_t>(p);
    }
    throw Fault{"unsupported operator " + op};
  }

  static Value promote_unary(const Value& v) {
    if (const auto* c = std::get_if<char>(&v)) return static_cast<std::int32_t>(static_cast<unsigned char>(*c));
    if (!is_numeric(v)) throw Fault{"numeric operand expected"};
    return v;
  }

  Value binary(const Expr& e) {
    const auto& op = e.text;
    if (op == "&&") return truthy(eval(*e.args[0])) && truthy(eval(*e.args[1]));
    if (op == "||") return truthy(eval(*e.args[0])) || truthy(eval(*e.args[1]));
    const Value a = eval(*e.args[0]);
    if (op == "instanceof") {
      if (is_null(a)) return false;
      const Type t = resolve(e.args[1]->type);
      return value_fits(t, a);
    }
    const Value b = eval(*e.args[1]);
    if (op == "==" || op == "!=") {
      const bool eq = same(a, b);
      return op == "==" ? eq : !eq;
    }
    if (op == "<" || op == ">" || op == "<=" || op == ">=") {
      if (!is_numeric(a) || !is_numeric(b)) throw Fault{"numeric operands expected"};
      bool r;
      if (is_integral(a) && is_integral(b)) {
        const auto x = as_long(a);
        const auto y = as_long(b);
        r = op == "<" ? x < y : op == ">" ? x > y : op == "<=" ? x <= y : x >= y;
      } else {
        const double x = as_double(a);
        const double y = as_double(b);
        r = op == "<" ? x < y : op == ">" ? x > y : op == "<=" ? x <= y : x >= y;
      }
      return r;
    }
    return arith(op, a, b);
  }

  static bool same(const Value& a, const Value& b) {
    if (is_null(a) || is_null(b)) return is_null(a) && is_null(b);
    if (is_numeric(a) && is_numeric(b)) {
      if (is_integral(a) && is_integral(b)) return as_long(a) == as_long(b);
      return as_double(a) == as_double(b);
    }
    if (a.index() != b.index()) return false;
    if (const auto* x = std::get_if<bool>(&a)) return *x == std::get<bool>(b);
    if (const auto* s = std::get_if<std::string>(&a)) return *s == std::get<std::string>(b);
    if (const auto* x = std::get_if<ArrayRef>(&a)) return *x == std::get<ArrayRef>(b);
    return std::get<ObjectRef>(a) == std::get<ObjectRef>(b);
  }

  Value arith(const std::string& op, const Value& a, const Value& b) {
    if (op == "+" && (std::holds_alternative<std::string>(a) || std::holds_alternative<std::string>(b))) {
      std::string s = to_java_string(a) + to_java_string(b);
      if (s.size() > detail::kMaxAllocation) raise("java.lang.OutOfMemoryError", "Java heap space");
      charge(s.size() / 256);
      return s;
    }
    if (std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b)) {
      const bool x = std::get<bool>(a);
      const bool y = std::get<bool>(b);
      if (op == "&") return x && y;
      if (op == "|") return x || y;
      if (op == "^") return x != y;
      throw Fault{"operator " + op + " is undefined for boolean"};
    }
    if (!is_numeric(a) || !is_numeric(b)) throw Fault{"operator " + op + " needs numeric operands"};
    if (op == "<<" || op == ">>" || op == ">>>") {
      const auto count = as_long(b);
      if (std::holds_alternative<std::int64_t>(a)) {
        const auto x = std::get<std::int64_t>(a);
        const int n = static_cast<int>(count & 63);
        if (op == "<<") return static_cast<std::int64_t>(static_cast<std::uint64_t>(x) << n);
        if (op == ">>") return x >> n;
        return static_cast<std::int64_t>(static_cast<std::uint64_t>(x) >> n);
      }
      const auto x = static_cast<std::int32_t>(as_long(a));
      const int n = static_cast<int>(count & 31);
      if (op == "<<") return static_cast<std::int32_t>(static_cast<std::uint32_t>(x) << n);
      if (op == ">>") return x >> n;
      return static_cast<std::int32_t>(static_cast<std::uint32_t>(x) >> n);
    }
    const auto is_d = [](const Value& v) { return std::holds_alternative<double>(v); };
    const auto is_f = [](const Value& v) { return std::holds_alternative<float>(v); };
    const auto is_l = [](const Value& v) { return std::holds_alternative<std::int64_t>(v); };
    if (is_d(a) || is_d(b) || is_f(a) || is_f(b)) {
      const double x = as_double(a);
      const double y = as_double(b);
      double r;
      if (op == "+") r = x + y;
      else if (op == "-") r = x - y;
      else if (op == "*") r = x * y;
      else if (op == "/") r = x / y;
      else if (op == "%") r = std::fmod(x, y);
      else throw Fault{"operator " + op + " is undefined for floating point"};
      if (is_d(a) || is_d(b)) return r;
      return static_cast<float>(r);
    }
    if (is_l(a) || is_l(b)) {
      const auto x = static_cast<std::uint64_t>(as_long(a));
      const auto y = static_cast<std::uint64_t>(as_long(b));
      const auto sx = static_cast<std::int64_t>(x);
      const auto sy = static_cast<std::int64_t>(y);
      if (op == "+") return static_cast<std::int64_t>(x + y);
      if (op == "-") return static_cast<std::int64_t>(x - y);
      if (op == "*") return static_cast<std::int64_t>(x * y);
      if (op == "&") return static_cast<std::int64_t>(x & y);
      if (op == "|") return static_cast<std::int64_t>(x | y);
      if (op == "^") return static_cast<std::int64_t>(x ^ y);
      if (op == "/" || op == "%") {
        if (sy == 0) raise("java.lang.ArithmeticException", "/ by zero");
        if (sx == std::numeric_limits<std::int64_t>::min() && sy == -1) {
          return op == "/" ? sx : std::int64_t{0};
        }
        return op == "/" ? sx / sy : sx % sy;
      }
      throw Fault{"unsupported operator " + op};
    }
    const auto x = static_cast<std::int32_t>(as_long(a));
    const auto y = static_cast<std::int32_t>(as_long(b));
    const auto ux = static_cast<std::uint32_t>(x);
    const auto uy = static_cast<std::uint32_t>(y);
    if (op == "+") return static_cast<std::int32_t>(ux + uy);
    if (op == "-") return static_cast<std::int32_t>(ux - uy);
    if (op == "*") return static_cast<std::int32_t>(ux * uy);
    if (op == "&") return x & y;
    if (op == "|") return x | y;
    if (op == "^") return x ^ y;
    if (op == "/" || op == "%") {
      if (y == 0) raise("java.lang.ArithmeticException", "/ by zero");
      if (x == std::numeric_limits<std::int32_t>::min() && y == -1) return op == "/" ? x : std::int32_t{0};
      return op == "/" ? x / y : x % y;
    }
    throw Fault{"unsupported operator " + op};
  }

  Value cast(const Type& to, const Value& v) {
    if (to.is_unknown() || is_null(v)) return v;
    if (to.dims == 0 && to.is_numeric()) {
      if (!is_numeric(v)) throw Fault{"cannot cast " + type_of(v).to_string() + " to " + to.to_string()};
      return coerce(v, to);
    }
    if (!value_fits(to, v)) {
      raise("java.lang.ClassCastException",
            "class " + owner_of(v) + " cannot be cast to class " + frontend::member_owner(to));
    }
    return v;
  }

  // ---- names, fields and calls --------------------------------------------------------------

  std::optional<frontend::TypeName> type_target(const Expr& e) {
    if (e.kind == ExprKind::name) {
      if (find_var(e.text)) return std::nullopt;
      return resolver_.lookup(e.text);
    }
    if (e.kind != ExprKind::field_access) return std::nullopt;
    std::vector<const Expr*> chain;
    const Expr* cur = &e;
    while (cur->kind == ExprKind::field_access) {
      chain.push_back(cur);
      cur = cur->target.get();
    }
    if (cur->kind != ExprKind::name || find_var(cur->text)) return std::nullopt;
    std::string dotted = cur->text;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) dotted += "." + (*it)->text;
    return resolver_.qualified(dotted);
  }

  void require_modelled(const std::string& owner) {
    const auto* lc = lib_.find_class(owner);
    if (lc && lc->opaque) throw Fault{"NoClassDefFoundError: " + owner};
  }

  Value library_field(const std::string& owner, const std::string& name) {
    require_modelled(owner);
    const auto* f = lib_.field(owner, name);
    if (!f) throw Fault{"unknown field " + owner + "." + name};
    if (owner == "java.lang.System") {
      auto& singleton = system_objects_[name];
      if (!singleton) {
        singleton = new_object(name == "in" ? "java.io.InputStream" : "java.io.PrintStream");
        singleton->text = name;
      }
      return singleton;
    }
    const Type t = frontend::spec_type(f->type);
    if (t.is(BaseType::int_)) return static_cast<std::int32_t>(std::stoll(f->constant));
    if (t.is(BaseType::long_)) return static_cast<std::int64_t>(std::stoll(f->constant));
    if (t.is(BaseType::double_)) return std::stod(f->constant);
    throw Fault{"unsupported field " + owner + "." + name};
  }

  Value field_access(const Expr& e) {
    if (auto tn = type_target(*e.target)) {
      if (tn->user) {
        auto& fm = statics_[resolver_.user_class(tn->owner)];
        if (const auto f = fm.find(e.text); f != fm.end()) return f->second.value;
        throw Fault{"unknown field " + e.text};
      }
      return library_field(tn->owner, e.text);
    }
    const Value recv = eval(*e.target);
    if (is_null(recv)) raise("java.lang.NullPointerException", "");
    if (const auto* a = std::get_if<ArrayRef>(&recv); a && e.text == "length") {
      return static_cast<std::int32_t>((*a)->items.size());
    }
    return library_field(owner_of(recv), e.text);
  }

  std::vector<Value> eval_args(const Expr& e) {
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(eval(*a));
    return args;
  }

  Value call(const Expr& e) {
    if (!e.target) {
      auto args = eval_args(e);
      for (const ClassDecl* c = class_stack_.empty() ? nullptr : class_stack_.back(); c; c = parent_.at(c)) {
        if (const auto* m = select_user(*c, e.text, args)) return call_user(*c, *m, std::move(args));
      }
      std::vector<const LibMethod*> free;
      for (const auto& m : lib_.free_functions()) {
        if (m.name == e.text) free.push_back(&m);
      }
      return call_library(free, "", nullptr, args, e.text);
    }
    if (auto tn = type_target(*e.target)) {
      auto args = eval_args(e);
      if (tn->user) {
        const auto* cls = resolver_.user_class(tn->owner);
        if (const auto* m = select_user(*cls, e.text, args)) return call_user(*cls, *m, std::move(args));
        throw Fault{"the method " + e.text + " is undefined"};
      }
      require_modelled(tn->owner);
      return call_library(lib_.methods(tn->owner, e.text), tn->owner, nullptr, args, e.text);
    }
    Value recv = eval(*e.target);
    auto args = eval_args(e);
    if (is_null(recv)) {
      raise("java.lang.NullPointerException",
            "Cannot invoke \"" + e.text + "()\" because value is null");
    }
    const std::string owner = owner_of(recv);
    require_modelled(owner);
    return call_library(lib_.methods(owner, e.text), owner, &recv, args, e.text);
  }

  const MethodDecl* select_user(const ClassDecl& c, const std::string& name, const std::vector<Value>& args) const {
    const MethodDecl* fallback = nullptr;
    for (const auto& m : c.methods) {
      if (m.name != name || m.params.size() != args.size()) continue;
      if (!fallback) fallback = &m;
      bool ok = true;
      for (std::size_t i = 0; i < args.size() && ok; ++i) {
        ok = value_fits(resolver_.resolve(m.params[i].type).value_or(Type::unknown()), args[i]);
      }
      if (ok) return &m;
    }
    return fallback;
  }

  Value call_library(const std::vector<const LibMethod*>& cands, const std::string& owner, Value* recv,
                     std::vector<Value>& args, const std::string& name) {
    const LibMethod* chosen = nullptr;
    for (const auto* m : cands) {
      const auto n = m->params.size();
      if (!(args.size() == n || (m->varargs && args.size() + 1 >= n))) continue;
      bool ok = true;
      for (std::size_t i = 0; i < args.size() && ok; ++i) {
        ok = spec_accepts(i < n ? m->params[i] : m->params.back(), args[i]);
      }
      if (ok) {
        chosen = m;
        break;
      }
    }
    if (!chosen) throw Fault{"no applicable overload for " + name};
    for (std::size_t i = 0; i < args.size() && i < chosen->params.size(); ++i) {
      const Type t = frontend::spec_type(chosen->params[i]);
      if (!t.is_unknown() && t.dims == 0 && t.is_numeric()) args[i] = coerce(args[i], t);
    }
    tick();
    return detail::call_builtin(*this, *chosen, owner, recv, args);
  }

  Value new_object_expr(const Expr& e) {
    auto tn = resolver_.lookup(e.type.name);
    if (!tn) throw Fault{"unknown type " + e.type.name};
    if (tn->user) throw Fault{"instances of " + e.type.name + " cannot be created"};
    auto args = eval_args(e);
    require_modelled(tn->owner);
    return call_library(lib_.methods(tn->owner, "<init>"), tn->owner, nullptr, args, "<init>");
  }

  const frontend::CompilationUnit& tree_;
  const Budget& budget_;
  frontend::NameResolver resolver_;
  const frontend::Library& lib_;
  Clock::time_point start_;
  std::uint64_t steps_ = 0;
  bool cancelled_ = false;
  int depth_ = 0;
  std::uint64_t next_id_ = 1;
  std::uint64_t random_;
  std::string output_;
  Value ret_value_;
  std::vector<std::vector<Frame>> frames_;
  std::vector<const ClassDecl*> class_stack_;
  std::unordered_map<const ClassDecl*, const ClassDecl*> parent_;
  std::unordered_map<const MethodDecl*, const ClassDecl*> method_class_;
  std::unordered_map<const ClassDecl*, std::unordered_map<std::string, Slot>> statics_;
  std::unordered_map<std::string, ObjectRef> system_objects_;
};

struct Compiled {
  frontend::ParseResult parsed;
  std::optional<std::string> error;
};

Compiled compile(const frontend::SourceUnit& unit, const frontend::TypeRegistry& registry) {
  Compiled c;
  const auto checked = frontend::check(unit, registry);
  if (checked.error_count > 0) {
    const auto& d = checked.diagnostics.front();
    c.error = std::string(frontend::code_name(d.code)) + " at " + std::to_string(d.span.start_line) + ":" +
              std::to_string(d.span.start_col) + ": " + d.message;
    return c;
  }
  c.parsed = frontend::parse(unit);
  return c;
}

RunOutcome compile_failure(std::string detail) {
  RunOutcome out;
  out.status = RunStatus::compile_error;
  out.detail = std::move(detail);
  return out;
}

}  // namespace

RunOutcome run_test(std::string_view imports, std::string_view function_source, std::string_view test_source,
                    const Budget& budget, const frontend::TypeRegistry& registry) {
  const frontend::SourceUnit unit(test_program(imports, function_source, test_source), frontend::Origin::spliced);
  auto c = compile(unit, registry);
  if (c.error) return compile_failure(*c.error);
  Interpreter in(c.parsed.tree, budget, registry);
  const ClassDecl* owner = nullptr;
  const MethodDecl* test = in.find_test_method(&owner);
  if (!test) return compile_failure("no test method found");
  return in.run([&]() -> Value { return in.call_user(*owner, *test, {}); });
}

RunOutcome run_main(const frontend::SourceUnit& program, const Budget& budget, const frontend::TypeRegistry& registry) {
  auto c = compile(program, registry);
  if (c.error) return compile_failure(*c.error);
  Interpreter in(c.parsed.tree, budget, registry);
  const ClassDecl* owner = nullptr;
  const MethodDecl* m = in.find_method("main", &owner);
  if (!m) return compile_failure("no main method found");
  return in.run([&]() -> Value {
    std::vector<Value> args;
    if (m->params.size() == 1) {
      auto arr = in.new_array(Type::of(BaseType::string_), 0);
      args.emplace_back(arr);
    }
    return in.call_user(*owner, *m, std::move(args));
  });
}

RunOutcome invoke(const frontend::SourceUnit& program, std::string_view method, std::vector<Value> args,
                  const Budget& budget, const frontend::TypeRegistry& registry) {
  auto c = compile(program, registry);
  if (c.error) return compile_failure(*c.error);
  Interpreter in(c.parsed.tree, budget, registry);
  const ClassDecl* owner = nullptr;
  const MethodDecl* m = in.find_method(method, &owner);
  if (!m) return compile_failure("method " + std::string(method) + " not found");
  return in.run([&]() -> Value { return in.call_user(*owner, *m, std::move(args)); });
}

}  // namespace snipfit::runtime
