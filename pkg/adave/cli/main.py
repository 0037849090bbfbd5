# adave/cli/main.py

"""
Main CLI entry point for the adave engine.

Usage:
    adave [-v] <command> [options]

Example:
    adave flow --frames-dir frames/ --out-dir flow/
    adave masks --frames-dir frames/ --resolutions 16,8 --out-dir masks/
    adave edit --synthetic --scene-frames 4 -s 4 --timesteps 980,0 --out-dir run/
    adave bench --density 0.15 -r 8 --out-dir bench/
    adave warp-error --frames-dir frames/ --flo-dir flow/

Exit codes: 0 ok, 2 I/O error, 3 validation/config/usage error,
4 internal invariant breach.
"""

import sys

import click

from adave import __version__
from adave.utils import (
    AdaveError,
    bind_run_context,
    get_logger,
    setup_logging,
    verbosity_to_level,
)

logger = get_logger(__name__)

USAGE_EXIT_CODE = 3


class AdaveGroup(click.Group):
    """Click group that maps usage errors and engine errors to exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except click.ClickException as e:
            e.show()
            sys.exit(USAGE_EXIT_CODE)
        except AdaveError as e:
            logger.debug("Command failed", error=type(e).__name__, details=e.details)
            click.echo(f"Error: {e}", err=True)
            sys.exit(e.exit_code)
        sys.exit(rv if isinstance(rv, int) else 0)


@click.group(cls=AdaveGroup)
@click.option(
    "-v", "--verbose", count=True, help="-v for INFO, -vv for DEBUG (overrides ADAVE_LOG)"
)
@click.version_option(__version__, prog_name="adave")
@click.pass_context
def cli(ctx: click.Context, verbose: int):
    """Motion-adaptive sparse cross-frame attention engine"""
    setup_logging(verbosity_to_level(verbose))
    bind_run_context(command=ctx.invoked_subcommand)


# Import subcommands
from .flow import flow  # noqa: E402
from .masks import masks  # noqa: E402
from .edit import edit  # noqa: E402
from .bench import bench  # noqa: E402
from .warp_error import warp_error  # noqa: E402

# Register subcommands
cli.add_command(flow)
cli.add_command(masks)
cli.add_command(edit)
cli.add_command(bench)
cli.add_command(warp_error)


def main():
    cli()


if __name__ == "__main__":
    main()
