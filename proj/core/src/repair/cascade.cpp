#include "snipfit/repair/cascade.hpp"

#include "snipfit/repair/fixes.hpp"
#include "snipfit/repair/integrate.hpp"

namespace snipfit::repair {

Candidate run_cascade(Candidate c, const Evaluator& eval, const CascadeOptions& opts) {
  eval.refresh(c);
  c.stage = Stage::retrieved;
  c.stage_errors.fill(c.error_count);

  const auto enter = [&](Stage s, bool enabled, auto&& step) {
    if (enabled && c.error_count > 0) {
      c = step(std::move(c));
      c.stage = s;
    }
    for (auto i = static_cast<std::size_t>(s); i < c.stage_errors.size(); ++i) c.stage_errors[i] = c.error_count;
  };
  enter(Stage::integrated, opts.integrate, [&](Candidate x) {
    x = extract_imports(std::move(x), eval);
    if (x.error_count > 0) x = snippetize(std::move(x), eval);
    if (x.error_count > 0) x = unwrap_main_in_main(std::move(x), eval);
    return x;
  });
  enter(Stage::fixed, opts.targeted_fixes, [&](Candidate x) { return targeted_fix_pass(std::move(x), eval); });
  enter(Stage::deleted, opts.delete_lines,
        [&](Candidate x) { return delete_lines(std::move(x), eval, opts.deletion); });
  c.degenerate = is_blank_body(c.body);
  return c;
}

}  // namespace snipfit::repair
