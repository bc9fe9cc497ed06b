#pragma once

#include <stdexcept>
#include <string>

namespace flatnormal {

enum class ErrorKind {
    domain,             // parameter or stencil outside the chart domain
    model_consistency,  // point off the ambient model quadric
    degeneracy,         // first fundamental form not positive definite
    frame,              // normal frame rank deficiency
    numerical,          // iteration failed to converge
    hypothesis,         // C <= 0, multiplicities, ... (guard conditions)
    argument,           // bad caller input
    parse,              // config / expression syntax
    integration,        // ODE or frame integration failure
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace flatnormal
