"""
Occupational Health Problem Exposome

Main entry point for the exposome command line.
"""

from src.cli import cli


def main():
    """Run the exposome command line."""
    cli(prog_name="exposome")


if __name__ == "__main__":
    main()
