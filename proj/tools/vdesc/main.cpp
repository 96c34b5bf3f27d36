#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "tool_common.hpp"
#include "vdesc/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"video description toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    vdtool::GlobalState state;
    app.add_option("--config", state.config_path,
                   "key=value file supplying defaults for model and extraction flags");
    app.add_option("--run-dir", state.run_dir,
                   "directory receiving outputs plus resolved_config.json and manifest.json");

    vdtool::register_cmd_keyframes(app, state);
    vdtool::register_cmd_describe(app, state);
    vdtool::register_cmd_dataset(app, state);
    vdtool::register_cmd_eval(app, state);
    vdtool::register_cmd_stats(app, state);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const vdesc::BatchFailure& e) {
        std::cerr << "error: " << e.what() << " (" << e.failed() << "/" << e.total()
                  << " records failed)" << std::endl;
        return 3;
    } catch (const vdesc::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return state.exit_code;
}
