#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mutkill
{

// The model is unusable: no initial pair, ill-typed predicate, bad mutation site.
class model_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A predicate could not be evaluated (unbound variable, operand type mismatch).
class eval_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// An enumeration or search ran past its node budget.
class budget_exhausted : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct diagnostic
{
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;
};

// Syntax errors carry one diagnostic; semantic errors carry all of them.
class parse_error : public std::runtime_error
{
public:
    explicit parse_error( std::vector<diagnostic> diags );

    [[nodiscard]] const std::vector<diagnostic>& diagnostics() const { return diags_; }

private:
    std::vector<diagnostic> diags_;
};

} // namespace mutkill
