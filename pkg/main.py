"""
Manifold samplers - command-line entry point.

Subcommands: torus, gamma, neyman, pitfall, validate.

Run with: uv run python main.py --help
"""

from cli.commands import main

if __name__ == "__main__":
    main()
