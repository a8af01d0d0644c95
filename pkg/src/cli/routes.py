"""
Subcommand definitions for the command-line front end.

This module maps each subcommand to its handler in `src.cli.handlers`
and declares its arguments.
"""
import argparse

from src.floer.cobordism import SCENARIOS, FlatLimitType, MiddleEnd
from . import handlers


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help="print the machine-readable report")
    common.add_argument('--window', metavar='d0..d7', help="fundamental window of eight degrees, e.g. 2..9")
    common.add_argument('--archive', metavar='PATH', help="record the report in this SQLite archive")
    return common


def setup_routes(parser: argparse.ArgumentParser) -> None:
    """
    Configures all subcommands on the top-level parser.

    Args:
        parser: The top-level argparse parser.
    """
    common = _common_options()
    commands = parser.add_subparsers(dest='command', metavar='COMMAND', required=True)

    # Manifest invariants
    ell = commands.add_parser('ell', parents=[common], help="ℓ invariant of flat-connection manifests")
    ell.add_argument('manifests', nargs='+', metavar='MANIFEST')
    ell.set_defaults(handler=handlers.cmd_ell)

    kappa = commands.add_parser('kappa', parents=[common], help="κ table over one window")
    kappa.add_argument('manifest')
    kappa.set_defaults(handler=handlers.cmd_kappa)

    bars = commands.add_parser('barcode', parents=[common], help="barcode of the filtered complex")
    bars.add_argument('manifest')
    bars.set_defaults(handler=handlers.cmd_barcode)

    # Chain-level and rank-level triangles
    triangle = commands.add_parser('triangle-check', parents=[common], help="detect an exact triangle")
    triangle.add_argument('path', nargs='?')
    triangle.add_argument('--generate', type=int, metavar='N', help="check N random triangles instead")
    triangle.add_argument('--seed', type=int, default=0)
    triangle.add_argument('--period', type=int, choices=(4, 8), default=8)
    triangle.add_argument('--max-dim', type=int, default=24)
    triangle.set_defaults(handler=handlers.cmd_triangle_check)

    surgery = commands.add_parser('surgery-ranks', parents=[common], help="ranks of I_*(S³_1/n(K))")
    surgery.add_argument('n', type=int)
    source = surgery.add_mutually_exclusive_group()
    source.add_argument('--dims', metavar='d0,...,d7', help="ranks of I_*(S³_±1(K)) by degree")
    source.add_argument('--manifest', help="read the base ranks from a manifest")
    surgery.set_defaults(handler=handlers.cmd_surgery_ranks)

    # Knots and certificates
    alex = commands.add_parser('alexander', parents=[common], help="cosmetic-surgery Alexander constraints")
    alex.add_argument('--search-bound', type=int, help="box size for the exhaustive cross-check (0 skips it)")
    alex.add_argument('--poly', help="also analyse this polynomial in t, e.g. 't**2 - 4*t + 7 - 4/t + t**-2'")
    alex.set_defaults(handler=handlers.cmd_alexander)

    certify = commands.add_parser('certify', parents=[common], help="check an ℓ-inequality certificate")
    certify.add_argument('certificate')
    certify.set_defaults(handler=handlers.cmd_certify)

    cob = commands.add_parser('cobordism', parents=[common], help="degree, level, energy and index arithmetic")
    cob.add_argument('--c-squared', default='0/1', metavar='p/q')
    cob.add_argument('--family-dim', type=int, default=0)
    cob.add_argument('--b1', type=int, default=0)
    cob.add_argument('--bplus', type=int, default=0)
    cob.add_argument('--not-simply-connected', action='store_true')
    cob.add_argument('--middle-end', action='append', choices=[e.value for e in MiddleEnd])
    cob.add_argument('--name', default='W')
    cob.add_argument('--cs', nargs=2, metavar=('FROM', 'TO'), help="Chern–Simons values for the energy relation")
    cob.add_argument('--index', nargs=2, type=int, metavar=('I_FROM', 'I_TO'))
    cob.add_argument('--e8', metavar='p/q', help="8E for the ASD index formula")
    cob.add_argument('--ends', nargs='*', choices=[e.value for e in FlatLimitType])
    cob.add_argument('--reducibles', type=int, nargs='?', const=0, metavar='N_MAX')
    cob.add_argument('--scenario', choices=sorted(SCENARIOS))
    cob.add_argument('--gap', type=int, help="i − j for the irreducible-pieces scenario")
    cob.set_defaults(handler=handlers.cmd_cobordism)

    # Archive
    history = commands.add_parser('history', parents=[common], help="list archived reports")
    history.add_argument('--limit', type=int, default=20)
    history.add_argument('--filter', metavar='COMMAND')
    history.add_argument('--show', type=int, metavar='ID')
    history.set_defaults(handler=handlers.cmd_history)
