#pragma once

#include <string>
#include <vector>

namespace enroll {

// Line-oriented record of the decisions a pipeline stage made.
class RunLog {
public:
    void add(std::string stage, std::string message)
    {
        lines_.push_back("[" + stage + "] " + message);
    }

    const std::vector<std::string>& lines() const noexcept { return lines_; }

    std::string text() const
    {
        std::string out;
        for (const auto& l : lines_) {
            out += l;
            out += '\n';
        }
        return out;
    }

private:
    std::vector<std::string> lines_;
};

} // namespace enroll
