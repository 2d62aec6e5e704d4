#include <exception>
#include <iostream>

#include "commands.hpp"
#include "ldscore/error.hpp"

int main(int argc, char** argv) {
    using namespace ldscore::cli;

    CLI::App app{"ldscore: letter-distribution analysis of AI-generated and human text"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions globals;
    app.add_option("--corpus", globals.corpus, "JSONL corpus");
    app.add_option("--scores", globals.scores, "Score CSV(s): sample_id,detector,score")->take_all();
    app.add_option("--seed", globals.seed, "Master seed")->capture_default_str();
    app.add_option("--out", globals.out, "Output file (a .manifest.json is written next to it)");
    app.add_flag("--force", globals.force, "Overwrite existing outputs");
    app.add_option("--filter", globals.filters, "key=value sample filter (repeatable)");

    const auto commands = register_commands(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        Context ctx(app, globals);
        for (const auto& c : commands) {
            if (c.app->parsed()) c.run(ctx, *c.app);
        }
    } catch (const ldscore::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
