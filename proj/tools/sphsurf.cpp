// Placeholder entry point; subcommands land together with the io module.
int main() { return 0; }
