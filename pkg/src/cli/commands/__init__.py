"""Subcommand implementations, one module each."""

from src.cli.commands import divide, gamma, report, seq, sigma, verify

COMMANDS = {
    "seq": seq.execute,
    "gamma": gamma.execute,
    "sigma": sigma.execute,
    "divide": divide.execute,
    "verify": verify.execute,
    "report": report.execute,
}

__all__ = ["COMMANDS"]
