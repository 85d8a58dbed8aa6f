"""
Subcommand suites. Each module exposes one `<module>_suite(ctx)` returning report records.
"""
