#include "snipfit/frontend/analyzer.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "snipfit/frontend/lexer.hpp"
#include "snipfit/frontend/library.hpp"
#include "snipfit/frontend/parser.hpp"
#include "snipfit/frontend/resolver.hpp"
#include "snipfit/frontend/types.hpp"

namespace snipfit::frontend {

namespace {

std::string simple_name(std::string_view q) {
  const auto dot = q.rfind('.');
  return std::string(dot == std::string_view::npos ? q : q.substr(dot + 1));
}

bool is_concrete(const Type& t) {
  return !t.is_unknown() && !t.is(BaseType::null_) && !t.is(BaseType::void_);
}

bool is_int_constant(const Expr& e) {
  switch (e.kind) {
    case ExprKind::literal: return e.lit == LitKind::int_ || e.lit == LitKind::char_;
    case ExprKind::unary: return (e.text == "-" || e.text == "+" || e.text == "~") && is_int_constant(*e.args[0]);
    case ExprKind::binary:
      return e.text != "&&" && e.text != "||" && is_int_constant(*e.args[0]) && is_int_constant(*e.args[1]);
    default: return false;
  }
}

bool is_literal_true(const Expr* e) {
  return e != nullptr && e->kind == ExprKind::literal && e->lit == LitKind::bool_ && e->value == "true";
}

class Analyzer {
 public:
  Analyzer(const CompilationUnit& tree, const SourceUnit& unit, const TypeRegistry& reg)
      : tree_(tree), unit_(unit), reg_(reg), lib_(Library::standard()), resolver_(tree, reg) {}

  std::vector<Diagnostic> run() {
    resolve_imports();
    for (const auto& c : tree_.classes) collect_classes(c);
    for (const auto& c : tree_.classes) klass(c);
    return std::move(diags_);
  }

 private:
  // ---- reporting ------------------------------------------------------------

  void report(DiagCode code, Range r, std::string msg, std::optional<std::string> hint = std::nullopt,
              std::optional<std::string> inferred = std::nullopt) {
    auto d = make_diagnostic(unit_, code, r.begin, r.end, std::move(msg));
    d.hint = std::move(hint);
    d.inferred_type = std::move(inferred);
    diags_.push_back(std::move(d));
  }

  void mismatch(Range r, const Type& to, const Type& from) {
    report(DiagCode::type_mismatch, r, "cannot convert from " + from.to_string() + " to " + to.to_string());
  }

  // Qualifier `N` of `N.x` that is neither a variable nor a known type.
  void unresolved_qualifier(const Expr& n) {
    if (!reg_.lookup(n.text).empty()) {
      report(DiagCode::unresolved_type, n.name_range, n.text + " cannot be resolved to a type", n.text);
    } else {
      report(DiagCode::unresolved, n.name_range, n.text + " cannot be resolved", n.text);
    }
  }

  // ---- imports and types ----------------------------------------------------

  void resolve_imports() {
    for (const auto& imp : tree_.imports) {
      if (!resolver_.import_resolves(imp)) {
        report(DiagCode::unresolved, imp.range, "the import " + imp.name + " cannot be resolved", imp.name);
      }
    }
  }

  std::optional<TypeName> qualified_type(const std::string& q) const { return resolver_.qualified(q); }
  std::optional<TypeName> lookup_type_name(const std::string& name) const { return resolver_.lookup(name); }

  Type resolve_type(const TypeRef& ref) {
    if (ref.empty()) return Type::unknown();
    auto t = lookup_type_name(ref.name);
    if (!t) {
      const auto s = simple_name(ref.name);
      report(DiagCode::unresolved_type, ref.range, s + " cannot be resolved to a type", s);
      return Type::unknown();
    }
    Type r = t->type;
    r.dims += ref.dims;
    return r;
  }

  Type quiet_type(const TypeRef& ref) const {
    auto t = lookup_type_name(ref.name);
    if (!t) return Type::unknown();
    Type r = t->type;
    r.dims += ref.dims;
    return r;
  }

  // ---- classes --------------------------------------------------------------

  void collect_classes(const ClassDecl& c) {
    if (!c.name.empty()) {
      if (user_classes_.count(c.name)) {
        report(DiagCode::duplicate_member, c.name_range, "duplicate class " + c.name, c.name);
      } else {
        user_classes_[c.name] = &c;
      }
    }
    for (const auto& n : c.classes) collect_classes(n);
  }

  void klass(const ClassDecl& c) {
    class_stack_.push_back(&c);
    auto& fmap = fields_[&c];
    std::vector<std::pair<Type, const Declarator*>> inits;
    for (const auto& f : c.fields) {
      const Type t = resolve_type(f.type);
      for (const auto& d : f.decls) {
        Type dt = t;
        if (!dt.is_unknown()) dt.dims += d.extra_dims;
        if (fmap.count(d.name)) {
          report(DiagCode::duplicate_member, d.name_range, "duplicate field " + d.name, d.name);
        } else {
          fmap[d.name] = dt;
        }
        if (d.init) inits.emplace_back(dt, &d);
      }
    }
    frames_.assign(1, {});
    for (const auto& [t, d] : inits) check_init(t, *d->init);

    std::unordered_set<std::string> sigs;
    for (const auto& m : c.methods) {
      std::string sig = m.name + "(";
      for (const auto& p : m.params) sig += quiet_type(p.type).to_string() + p.type.spelled() + ",";
      if (!sigs.insert(sig).second) {
        report(DiagCode::duplicate_member, m.name_range, "duplicate method " + m.name, m.name);
      }
    }
    for (const auto& m : c.methods) method(m);
    for (const auto& n : c.classes) klass(n);
    class_stack_.pop_back();
  }

  void method(const MethodDecl& m) {
    frames_.assign(1, {});
    breaks_.clear();
    ret_ = m.ret.name == "void" && m.ret.dims == 0 ? Type::of(BaseType::void_) : resolve_type(m.ret);
    for (const auto& p : m.params) declare(p.name, resolve_type(p.type), p.name_range);
    if (!m.body) return;
    const bool normal = stmt(*m.body);
    if (normal && m.ret.name != "void") {
      const auto end = m.body->range.end;
      report(DiagCode::missing_return, Range{end > 0 ? end - 1 : 0, end},
             "this method must return a result of type " + ret_.to_string(), m.name);
    }
  }

  // ---- scopes ---------------------------------------------------------------

  std::optional<Type> lookup_var(const std::string& name) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      if (const auto f = it->find(name); f != it->end()) return f->second;
    }
    for (auto it = class_stack_.rbegin(); it != class_stack_.rend(); ++it) {
      const auto fm = fields_.find(*it);
      if (fm == fields_.end()) continue;
      if (const auto f = fm->second.find(name); f != fm->second.end()) return f->second;
    }
    return std::nullopt;
  }

  void declare(const std::string& name, const Type& t, Range where) {
    if (name.empty()) return;
    for (const auto& f : frames_) {
      if (f.count(name)) {
        report(DiagCode::duplicate_member, where, "duplicate local variable " + name, name);
        return;
      }
    }
    frames_.back()[name] = t;
  }

  struct FrameGuard {
    Analyzer& a;
    explicit FrameGuard(Analyzer& an) : a(an) { a.frames_.emplace_back(); }
    ~FrameGuard() { a.frames_.pop_back(); }
  };

  // ---- statements -------------------------------------------------------------

  // Returns whether the statement can complete normally.
  bool stmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::block: {
        FrameGuard g(*this);
        bool reachable = true;
        for (const auto& c : s.body) {
          if (!stmt(*c)) reachable = false;
        }
        return reachable;
      }
      case StmtKind::local_var: {
        local_var(s);
        return true;
      }
      case StmtKind::expr:
        if (s.expr) expr(*s.expr);
        return true;
      case StmtKind::if_: {
        condition(s.expr.get());
        const bool t = s.then_branch ? scoped(*s.then_branch) : true;
        const bool e = s.else_branch ? scoped(*s.else_branch) : true;
        return t || e;
      }
      case StmtKind::while_: {
        condition(s.expr.get());
        breaks_.push_back(false);
        if (s.then_branch) scoped(*s.then_branch);
        const bool broke = breaks_.back();
        breaks_.pop_back();
        return !is_literal_true(s.expr.get()) || broke;
      }
      case StmtKind::for_: {
        FrameGuard g(*this);
        for (const auto& init : s.body) stmt(*init);
        if (s.expr) condition(s.expr.get());
        for (const auto& u : s.update) expr(*u);
        breaks_.push_back(false);
        if (s.then_branch) scoped(*s.then_branch);
        const bool broke = breaks_.back();
        breaks_.pop_back();
        return (s.expr && !is_literal_true(s.expr.get())) || broke;
      }
      case StmtKind::for_each: {
        FrameGuard g(*this);
        const Type var = resolve_type(s.type);
        const Type it = s.expr ? expr(*s.expr) : Type::unknown();
        Type elem = Type::unknown();
        if (it.is_array()) {
          elem = it.element();
        } else if (!it.is_unknown() && !(it.base == BaseType::class_ && lib_.is_subclass(it.cls, "java.util.List"))) {
          report(DiagCode::type_mismatch, s.expr->range, "can only iterate over an array or a List");
        }
        if (!assignable(var, elem, library_is_subclass)) mismatch(s.name_range, var, elem);
        declare(s.text, var, s.name_range);
        breaks_.push_back(false);
        if (s.then_branch) scoped(*s.then_branch);
        breaks_.pop_back();
        return true;
      }
      case StmtKind::return_: {
        if (s.expr) {
          const Type t = expr(*s.expr);
          if (ret_.is(BaseType::void_)) {
            report(DiagCode::type_mismatch, s.expr->range, "void methods cannot return a value");
          } else {
            check_assignable(ret_, t, *s.expr);
          }
        } else if (!ret_.is(BaseType::void_) && !ret_.is_unknown()) {
          report(DiagCode::type_mismatch, s.range, "missing return value");
        }
        return false;
      }
      case StmtKind::break_:
        if (!breaks_.empty()) breaks_.back() = true;
        return false;
      case StmtKind::continue_:
        return false;
      case StmtKind::throw_: {
        if (s.expr) {
          const Type t = expr(*s.expr);
          if (!t.is_unknown() && !(t.base == BaseType::class_ && t.dims == 0 &&
                                   lib_.is_subclass(t.cls, "java.lang.Throwable"))) {
            report(DiagCode::type_mismatch, s.expr->range, "only throwable objects can be thrown");
          }
        }
        return false;
      }
      case StmtKind::try_: {
        bool normal = s.then_branch ? stmt(*s.then_branch) : true;
        for (const auto& c : s.catches) {
          FrameGuard g(*this);
          declare(c.name, resolve_type(c.type), c.name_range);
          if (c.body && stmt(*c.body)) normal = true;
        }
        if (s.else_branch) {
          const bool fin = stmt(*s.else_branch);
          normal = normal && fin;
        }
        return normal;
      }
      case StmtKind::nested_method:
        report(DiagCode::nested_method, s.method->name_range,
               "method " + s.method->name + " cannot be declared inside another method", s.method->name);
        return true;
      case StmtKind::misplaced_import:
        report(DiagCode::misplaced_import, s.range, "import declarations are only allowed at the top of a file",
               s.text);
        return true;
      case StmtKind::nested_class:
      case StmtKind::empty:
      case StmtKind::error:
        return true;
    }
    return true;
  }

  // A branch or loop body that is not a block still gets its own scope.
  bool scoped(const Stmt& s) {
    FrameGuard g(*this);
    return stmt(s);
  }

  void local_var(const Stmt& s) {
    const Type t = resolve_type(s.type);
    for (const auto& d : s.decls) {
      Type dt = t;
      if (!dt.is_unknown()) dt.dims += d.extra_dims;
      if (d.init) check_init(dt, *d.init);
      declare(d.name, dt, d.name_range);
    }
  }

  void check_init(const Type& t, const Expr& init) {
    if (init.kind == ExprKind::array_init) {
      array_init(init, t);
      return;
    }
    check_assignable(t, expr(init), init);
  }

  void check_assignable(const Type& to, const Type& from, const Expr& rhs) {
    if (assignable(to, from, library_is_subclass)) return;
    if (to.is(BaseType::char_) && from.is(BaseType::int_) && is_int_constant(rhs)) return;
    mismatch(rhs.range, to, from);
  }

  void condition(const Expr* e) {
    if (!e) return;
    const Type t = expr(*e);
    if (!t.is_unknown() && !t.is(BaseType::boolean_)) mismatch(e->range, Type::of(BaseType::boolean_), t);
  }

  // ---- expressions ------------------------------------------------------------

  Type expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::literal: return literal(e);
      case ExprKind::name: {
        if (auto t = lookup_var(e.text)) return *t;
        report(DiagCode::undeclared_var, e.name_range, e.text + " cannot be resolved to a variable", e.text);
        return Type::unknown();
      }
      case ExprKind::field_access: return field_access(e);
      case ExprKind::call: return call(e);
      case ExprKind::index: {
        const Type arr = expr(*e.args[0]);
        const Type idx = expr(*e.args[1]);
        if (!assignable(Type::of(BaseType::int_), idx)) mismatch(e.args[1]->range, Type::of(BaseType::int_), idx);
        if (arr.is_unknown()) return Type::unknown();
        if (!arr.is_array()) {
          report(DiagCode::type_mismatch, e.args[0]->range, "the type of the expression must be an array type");
          return Type::unknown();
        }
        return arr.element();
      }
      case ExprKind::unary: return unary(e);
      case ExprKind::postfix: {
        const Type t = expr(*e.args[0]);
        if (!t.is_unknown() && !t.is_numeric()) {
          report(DiagCode::type_mismatch, e.range, "operator " + e.text + " is undefined for " + t.to_string());
        }
        return t;
      }
      case ExprKind::binary: return binary(e);
      case ExprKind::assign: return assign(e);
      case ExprKind::ternary: {
        condition(e.args[0].get());
        const Type a = expr(*e.args[1]);
        const Type b = expr(*e.args[2]);
        if (a.is_unknown() || b.is_unknown()) return Type::unknown();
        if (a.is_numeric() && b.is_numeric()) return numeric_promotion(a, b);
        if (a.is(BaseType::null_)) return b;
        if (b.is(BaseType::null_)) return a;
        if (assignable(a, b, library_is_subclass)) return a;
        if (assignable(b, a, library_is_subclass)) return b;
        return Type::unknown();
      }
      case ExprKind::cast: {
        const Type to = resolve_type(e.type);
        const Type from = expr(*e.args[0]);
        const bool ok = to.is_unknown() || from.is_unknown() || (to.is_numeric() && from.is_numeric()) ||
                        (to.is_reference() && from.is_reference()) ||
                        (to.is(BaseType::boolean_) && from.is(BaseType::boolean_));
        if (!ok) report(DiagCode::type_mismatch, e.range, "cannot cast from " + from.to_string() + " to " + to.to_string());
        return to;
      }
      case ExprKind::new_array: {
        TypeRef base = e.type;
        base.dims = 0;
        const Type elem = resolve_type(base);
        for (const auto& a : e.args) {
          const Type d = expr(*a);
          if (!assignable(Type::of(BaseType::int_), d)) mismatch(a->range, Type::of(BaseType::int_), d);
        }
        if (elem.is_unknown()) return elem;
        Type t = elem;
        t.dims = e.type.dims;
        return t;
      }
      case ExprKind::array_init: {
        if (e.type.empty()) {
          for (const auto& a : e.args) {
            if (a->kind != ExprKind::array_init) expr(*a);
          }
          return Type::unknown();
        }
        return array_init(e, Type::unknown());
      }
      case ExprKind::new_object: return new_object(e);
      case ExprKind::error:
        if (e.target) expr(*e.target);
        for (const auto& a : e.args) expr(*a);
        return Type::unknown();
    }
    return Type::unknown();
  }

  static Type literal(const Expr& e) {
    switch (e.lit) {
      case LitKind::int_: return Type::of(BaseType::int_);
      case LitKind::long_: return Type::of(BaseType::long_);
      case LitKind::float_: return Type::of(BaseType::float_);
      case LitKind::double_: return Type::of(BaseType::double_);
      case LitKind::char_: return Type::of(BaseType::char_);
      case LitKind::string_: return Type::of(BaseType::string_);
      case LitKind::bool_: return Type::of(BaseType::boolean_);
      case LitKind::null_: return Type::of(BaseType::null_);
    }
    return Type::unknown();
  }

  Type array_init(const Expr& e, const Type& expected) {
    const Type t = e.type.empty() ? expected : resolve_type(e.type);
    if (t.is_unknown() || !t.is_array()) {
      if (!t.is_unknown()) report(DiagCode::type_mismatch, e.range, "array initializer requires an array type");
      for (const auto& a : e.args) {
        if (a->kind != ExprKind::array_init) expr(*a);
      }
      return t.is_unknown() ? t : Type::unknown();
    }
    const Type elem = t.element();
    for (const auto& a : e.args) {
      if (a->kind == ExprKind::array_init) {
        array_init(*a, elem);
      } else {
        check_assignable(elem, expr(*a), *a);
      }
    }
    return t;
  }

  // `X` or `a.b.X` naming a type, provided its first segment is not a variable.
  std::optional<TypeName> type_target(const Expr& e) const {
    if (e.kind == ExprKind::name) {
      if (lookup_var(e.text)) return std::nullopt;
      return lookup_type_name(e.text);
    }
    if (e.kind != ExprKind::field_access) return std::nullopt;
    std::vector<const Expr*> chain;
    const Expr* cur = &e;
    while (cur->kind == ExprKind::field_access) {
      chain.push_back(cur);
      cur = cur->target.get();
    }
    if (cur->kind != ExprKind::name || lookup_var(cur->text)) return std::nullopt;
    std::string dotted = cur->text;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) dotted += "." + (*it)->text;
    return qualified_type(dotted);
  }

  Type field_access(const Expr& e) {
    const Expr& target = *e.target;
    if (auto tn = type_target(target)) {
      if (tn->user) {
        const auto* decl = user_classes_.at(tn->owner);
        const auto& fm = fields_[decl];
        if (const auto it = fm.find(e.text); it != fm.end()) return it->second;
      } else if (!tn->owner.empty()) {
        const auto* lc = lib_.find_class(tn->owner);
        if (lc && lc->opaque) return Type::unknown();
        if (const auto* f = lib_.field(tn->owner, e.text)) return spec_type(f->type);
      }
      report(DiagCode::unresolved, e.name_range, e.text + " cannot be resolved or is not a field", e.text);
      return Type::unknown();
    }
    if (target.kind == ExprKind::name && !lookup_var(target.text)) {
      unresolved_qualifier(target);
      return Type::unknown();
    }
    const Type recv = expr(target);
    if (recv.is_unknown()) return recv;
    if (recv.is_array() && e.text == "length") return Type::of(BaseType::int_);
    if (recv.base == BaseType::class_ && recv.dims == 0) {
      if (const auto uc = user_classes_.find(recv.cls); uc != user_classes_.end()) {
        const auto& fm = fields_[uc->second];
        if (const auto it = fm.find(e.text); it != fm.end()) return it->second;
      } else {
        const auto* lc = lib_.find_class(recv.cls);
        if (lc && lc->opaque) return Type::unknown();
        if (const auto* f = lib_.field(recv.cls, e.text)) return spec_type(f->type);
      }
    }
    report(DiagCode::unresolved, e.name_range, e.text + " cannot be resolved or is not a field", e.text);
    return Type::unknown();
  }

  bool accepts(const std::string& spec, const Type& arg) const {
    if (arg.is_unknown()) return true;
    if (arg.is(BaseType::void_)) return false;
    if (spec == "any") return true;
    if (spec == "num") return arg.is_numeric();
    if (spec == "array") return arg.is_array() || arg.is(BaseType::null_);
    if (spec == "char|String") return arg.is(BaseType::char_) || arg.is(BaseType::string_) || arg.is(BaseType::int_);
    return assignable(spec_type(spec), arg, library_is_subclass);
  }

  Type return_type(const LibMethod& m, const std::vector<Type>& args, const Type& recv) const {
    if (m.ret == "$0") {
      if (args.empty()) return Type::unknown();
      return args[0].is(BaseType::char_) ? Type::of(BaseType::int_) : args[0];
    }
    if (m.ret == "$num") {
      Type t = args.empty() ? Type::unknown() : args[0];
      for (std::size_t i = 1; i < args.size(); ++i) t = numeric_promotion(t, args[i]);
      if (t.is(BaseType::char_)) t = Type::of(BaseType::int_);
      return t;
    }
    if (m.ret == "$recv") return recv;
    if (m.ret == "void") return Type::of(BaseType::void_);
    return spec_type(m.ret);
  }

  Type select_library(const std::vector<const LibMethod*>& cands, const std::vector<Type>& args, const Expr& call,
                      const std::string& name, const Type& recv) {
    std::vector<const LibMethod*> arity;
    for (const auto* m : cands) {
      const auto n = m->params.size();
      if (args.size() == n || (m->varargs && args.size() + 1 >= n)) arity.push_back(m);
    }
    if (arity.empty()) {
      report(DiagCode::arity, call.name_range,
             "method " + name + " is not applicable for " + std::to_string(args.size()) + " argument(s)", name);
      return Type::unknown();
    }
    for (const auto* m : arity) {
      bool ok = true;
      for (std::size_t i = 0; i < args.size() && ok; ++i) {
        const auto& spec = i < m->params.size() ? m->params[i] : m->params.back();
        ok = accepts(spec, args[i]);
      }
      if (ok) return return_type(*m, args, recv);
    }
    report(DiagCode::type_mismatch, call.range, "method " + name + " is not applicable for the argument types");
    return Type::unknown();
  }

  Type select_user(const ClassDecl& c, const std::vector<Type>& args, const Expr& call) {
    std::vector<const MethodDecl*> arity;
    for (const auto& m : c.methods) {
      if (m.name == call.text && m.params.size() == args.size()) arity.push_back(&m);
    }
    if (arity.empty()) {
      report(DiagCode::arity, call.name_range,
             "method " + call.text + " is not applicable for " + std::to_string(args.size()) + " argument(s)",
             call.text);
      return Type::unknown();
    }
    for (const auto* m : arity) {
      bool ok = true;
      for (std::size_t i = 0; i < args.size() && ok; ++i) {
        ok = assignable(quiet_type(m->params[i].type), args[i], library_is_subclass);
      }
      if (ok) {
        if (m->ret.name == "void" && m->ret.dims == 0) return Type::of(BaseType::void_);
        return quiet_type(m->ret);
      }
    }
    report(DiagCode::type_mismatch, call.range, "method " + call.text + " is not applicable for the argument types");
    return Type::unknown();
  }

  static bool declares_method(const ClassDecl& c, const std::string& name) {
    return std::any_of(c.methods.begin(), c.methods.end(), [&](const MethodDecl& m) { return m.name == name; });
  }

  std::vector<Type> arg_types(const Expr& e) {
    std::vector<Type> out;
    out.reserve(e.args.size());
    for (const auto& a : e.args) out.push_back(expr(*a));
    return out;
  }

  Type call(const Expr& e) {
    if (!e.target) {
      const auto args = arg_types(e);
      for (auto it = class_stack_.rbegin(); it != class_stack_.rend(); ++it) {
        if (declares_method(**it, e.text)) return select_user(**it, args, e);
      }
      std::vector<const LibMethod*> free;
      for (const auto& m : lib_.free_functions()) {
        if (m.name == e.text) free.push_back(&m);
      }
      if (!free.empty()) return select_library(free, args, e, e.text, Type::unknown());
      report(DiagCode::unresolved, e.name_range, "the method " + e.text + " is undefined", e.text);
      return Type::unknown();
    }
    const Expr& target = *e.target;
    if (auto tn = type_target(target)) {
      const auto args = arg_types(e);
      if (tn->user) {
        const auto* decl = user_classes_.at(tn->owner);
        if (declares_method(*decl, e.text)) return select_user(*decl, args, e);
      } else if (!tn->owner.empty()) {
        const auto* lc = lib_.find_class(tn->owner);
        if (lc && lc->opaque) return Type::unknown();
        const auto cands = lib_.methods(tn->owner, e.text);
        if (!cands.empty()) return select_library(cands, args, e, e.text, tn->type);
      }
      report(DiagCode::unresolved, e.name_range,
             "the method " + e.text + " is undefined for the type " + tn->type.to_string(), e.text);
      return Type::unknown();
    }
    if (target.kind == ExprKind::name && !lookup_var(target.text)) {
      unresolved_qualifier(target);
      arg_types(e);
      return Type::unknown();
    }
    const Type recv = expr(target);
    const auto args = arg_types(e);
    if (recv.is_unknown()) return recv;
    if (recv.is(BaseType::null_) || recv.is(BaseType::void_)) {
      report(DiagCode::type_mismatch, target.range, "cannot invoke " + e.text + " on " + recv.to_string());
      return Type::unknown();
    }
    if (recv.base == BaseType::class_ && recv.dims == 0) {
      if (const auto uc = user_classes_.find(recv.cls); uc != user_classes_.end()) {
        if (declares_method(*uc->second, e.text)) return select_user(*uc->second, args, e);
        report(DiagCode::unresolved, e.name_range, "the method " + e.text + " is undefined", e.text);
        return Type::unknown();
      }
      const auto* lc = lib_.find_class(recv.cls);
      if (lc && lc->opaque) return Type::unknown();
    }
    const auto owner = member_owner(recv);
    const auto cands = lib_.methods(owner, e.text);
    if (cands.empty()) {
      report(DiagCode::unresolved, e.name_range,
             "the method " + e.text + " is undefined for the type " + recv.to_string(), e.text);
      return Type::unknown();
    }
    return select_library(cands, args, e, e.text, recv);
  }

  Type new_object(const Expr& e) {
    auto tn = lookup_type_name(e.type.name);
    if (!tn) {
      const auto s = simple_name(e.type.name);
      report(DiagCode::unresolved_type, e.type.range, s + " cannot be resolved to a type", s);
      arg_types(e);
      return Type::unknown();
    }
    const auto args = arg_types(e);
    if (tn->user) {
      report(DiagCode::unresolved_type, e.type.range, "instances of " + e.type.name + " cannot be created here",
             e.type.name);
      return Type::unknown();
    }
    const auto* lc = lib_.find_class(tn->owner);
    if (lc && lc->opaque) return tn->type;
    if (!lc || !lc->instantiable) {
      report(DiagCode::type_mismatch, e.type.range, "cannot instantiate the type " + tn->type.to_string());
      return Type::unknown();
    }
    const auto cands = lib_.methods(tn->owner, "<init>");
    if (cands.empty()) {
      report(DiagCode::type_mismatch, e.type.range, "cannot instantiate the type " + tn->type.to_string());
      return Type::unknown();
    }
    select_library(cands, args, e, "<init>", tn->type);
    return tn->type;
  }

  Type unary(const Expr& e) {
    const Type t = expr(*e.args[0]);
    if (t.is_unknown()) return t;
    if (e.text == "!") {
      if (!t.is(BaseType::boolean_)) mismatch(e.args[0]->range, Type::of(BaseType::boolean_), t);
      return Type::of(BaseType::boolean_);
    }
    if (!t.is_numeric()) {
      report(DiagCode::type_mismatch, e.range, "operator " + e.text + " is undefined for " + t.to_string());
      return Type::unknown();
    }
    if (e.text == "++" || e.text == "--") return t;
    return numeric_promotion(t, t);
  }

  Type binary(const Expr& e) {
    const Type a = expr(*e.args[0]);
    if (e.text == "instanceof") return Type::of(BaseType::boolean_);
    const Type b = expr(*e.args[1]);
    const auto& op = e.text;
    const auto bad = [&]() {
      report(DiagCode::type_mismatch, e.range,
             "operator " + op + " is undefined for " + a.to_string() + ", " + b.to_string());
      return Type::unknown();
    };
    const bool unknown = a.is_unknown() || b.is_unknown();
    if (op == "&&" || op == "||") {
      if (!unknown && !(a.is(BaseType::boolean_) && b.is(BaseType::boolean_))) bad();
      return Type::of(BaseType::boolean_);
    }
    if (op == "==" || op == "!=") {
      const bool ok = unknown || (a.is_numeric() && b.is_numeric()) ||
                      (a.is(BaseType::boolean_) && b.is(BaseType::boolean_)) ||
                      (a.is_reference() && b.is_reference());
      if (!ok) bad();
      return Type::of(BaseType::boolean_);
    }
    if (op == "<" || op == ">" || op == "<=" || op == ">=") {
      if (!unknown && !(a.is_numeric() && b.is_numeric())) bad();
      return Type::of(BaseType::boolean_);
    }
    if (op == "+" && (a.is(BaseType::string_) || b.is(BaseType::string_))) {
      if (a.is(BaseType::void_) || b.is(BaseType::void_)) return bad();
      return Type::of(BaseType::string_);
    }
    if (unknown) return Type::unknown();
    if ((op == "&" || op == "|" || op == "^") && a.is(BaseType::boolean_) && b.is(BaseType::boolean_)) {
      return Type::of(BaseType::boolean_);
    }
    if (!(a.is_numeric() && b.is_numeric())) return bad();
    if (op == "<<" || op == ">>" || op == ">>>") return numeric_promotion(a, a);
    return numeric_promotion(a, b);
  }

  Type assign(const Expr& e) {
    const Expr& lhs = *e.args[0];
    const Expr& rhs = *e.args[1];
    if (lhs.kind == ExprKind::name && !lookup_var(lhs.text)) {
      const Type rt = rhs.kind == ExprKind::array_init ? array_init(rhs, Type::unknown()) : expr(rhs);
      std::optional<std::string> inferred;
      if (e.text == "=" && is_concrete(rt)) inferred = rt.to_string();
      report(DiagCode::undeclared_var, lhs.name_range, lhs.text + " cannot be resolved to a variable", lhs.text,
             inferred);
      return rt;
    }
    const Type lt = expr(lhs);
    const Type rt = rhs.kind == ExprKind::array_init ? array_init(rhs, lt) : expr(rhs);
    if (e.text == "=") {
      check_assignable(lt, rt, rhs);
      return lt;
    }
    if (lt.is_unknown() || rt.is_unknown()) return lt;
    if (e.text == "+=" && lt.is(BaseType::string_)) {
      if (rt.is(BaseType::void_)) mismatch(rhs.range, lt, rt);
      return lt;
    }
    const bool bool_op = e.text == "&=" || e.text == "|=" || e.text == "^=";
    const bool ok = (lt.is_numeric() && rt.is_numeric()) ||
                    (bool_op && lt.is(BaseType::boolean_) && rt.is(BaseType::boolean_));
    if (!ok) {
      report(DiagCode::type_mismatch, e.range,
             "operator " + e.text + " is undefined for " + lt.to_string() + ", " + rt.to_string());
    }
    return lt;
  }

  const CompilationUnit& tree_;
  const SourceUnit& unit_;
  const TypeRegistry& reg_;
  const Library& lib_;
  NameResolver resolver_;
  std::vector<Diagnostic> diags_;
  std::unordered_map<std::string, const ClassDecl*> user_classes_;
  std::unordered_map<const ClassDecl*, std::unordered_map<std::string, Type>> fields_;
  std::vector<const ClassDecl*> class_stack_;
  std::vector<std::unordered_map<std::string, Type>> frames_;
  std::vector<bool> breaks_;
  Type ret_;
};

}  // namespace

std::vector<Diagnostic> analyze(const CompilationUnit& tree, const SourceUnit& unit, const TypeRegistry& registry) {
  return Analyzer(tree, unit, registry).run();
}

CompileResult check(const SourceUnit& unit, const TypeRegistry& registry) {
  auto parsed = parse(unit);
  CompileResult out;
  out.diagnostics = std::move(parsed.diagnostics);
  auto semantic = analyze(parsed.tree, unit, registry);
  out.diagnostics.insert(out.diagnostics.end(), std::make_move_iterator(semantic.begin()),
                         std::make_move_iterator(semantic.end()));
  std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.begin < b.begin; });
  out.error_count = static_cast<int>(out.diagnostics.size());
  return out;
}

}  // namespace snipfit::frontend
