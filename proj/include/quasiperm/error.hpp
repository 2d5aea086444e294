#ifndef QUASIPERM_ERROR_HPP
#define QUASIPERM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace quasiperm {

/// Machine-readable failure causes surfaced by the library.
enum class errc {
  empty_input,
  not_a_bijection,
  index_out_of_range,
  not_square,
  negative_entry,
  row_sum_not_one,
  col_sum_not_one,
  order_too_large,
  outside_cube,
  bad_root_count,
  roots_induce_wrong_type,
  type_mismatch,
  dimension_mismatch,
  not_proportional,
  wrong_sign,
  not_psd,
  relation_fails,
  no_straddle,
  bad_size,
  mismatch_with_paper_list,
  kernel_too_large,
  budget_exhausted,
  parse_error,
  validation_error,
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace quasiperm

#endif
