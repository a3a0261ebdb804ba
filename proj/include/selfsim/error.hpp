#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace selfsim {

// Domain error tagged with the pipeline stage that produced it. The CLI
// turns these into structured JSON on stderr with exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& message)
        : std::runtime_error(message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace selfsim
