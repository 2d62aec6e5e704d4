#pragma once

#include <functional>
#include <vector>

#include "cli_support.hpp"

namespace ldscore::cli {

struct Command {
    CLI::App* app = nullptr;
    std::function<void(Context&, const CLI::App&)> run;
};

std::vector<Command> register_commands(CLI::App& app);

}  // namespace ldscore::cli
