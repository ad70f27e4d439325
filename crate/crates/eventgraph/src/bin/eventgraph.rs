fn main() {
    std::process::exit(eventgraph::cli::cli_dispatch(std::env::args_os()));
}
