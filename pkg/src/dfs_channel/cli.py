import argparse
import logging
import os
import sys
from collections.abc import Mapping
from contextlib import ExitStack
from typing import TextIO

import numpy as np

from . import channel, export, multiplicity, oracle, utils
from .types import MultiplicityTable, ResourceCapError, SectorIndex, valid_spins

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

ORACLES = ("cg", "weight", "triple", "character", "commutant")


class CLI:
    """Argument parsing and the sub commands"""

    def __init__(self, args: argparse.Namespace, stream: TextIO) -> None:
        self.args: argparse.Namespace = args
        self.stream: TextIO = stream

    def build_table(self, n: int, l_max: int) -> MultiplicityTable:
        return multiplicity.build_table(n, l_max, cap=self.args.cap_table)

    def cmd_table(self) -> int:
        args = self.args
        table = self.build_table(args.n, args.l_max)
        records = export.table_records(table)
        _logger.info(f"Exporting {len(records)} multiplicities N<={args.n} L<={args.l_max}")
        export.write_records(
            records, args.format, self.stream, n=args.n, l_max=args.l_max
        )
        return EXIT_OK

    def cmd_best(self) -> int:
        args = self.args
        table = self.build_table(args.n, args.l_max)
        profile = multiplicity.capacity_profile(table, args.n)
        export.write_records(
            export.capacity_records(args.n, profile),
            args.format,
            self.stream,
            n=args.n,
            l_max=args.l_max,
        )
        return EXIT_OK

    def cmd_grid(self) -> int:
        args = self.args
        L = args.l
        if args.three_d:
            rows = export.grid_3d_rows(
                multiplicity.summation_grid(L),
                multiplicity.tetrahedron_vertices(L),
            )
            export.write_rows(rows, export.GRID_3D_FIELDS, args.format, self.stream, l=L)
            return EXIT_OK

        if args.two_j is None:
            raise ValueError("--two-j is required unless --three-d is given")

        vertices = multiplicity.rectangle_vertices(L, args.two_j)
        points = multiplicity.recursion_support(SectorIndex(args.n, L), args.two_j)
        export.write_rows(
            export.grid_rows(points, vertices),
            export.GRID_FIELDS,
            args.format,
            self.stream,
            l=L,
            two_j=args.two_j,
        )
        return EXIT_OK

    def _compare(
        self,
        sector: SectorIndex,
        table: MultiplicityTable,
        label: str,
        other: Mapping[int, int],
    ) -> int:
        for spin in valid_spins(sector):
            expected = multiplicity.k_value(table, sector, spin.two_j)
            found = other.get(spin.two_j, 0)
            name = f"K^{utils.format_spin(spin.two_j)}"
            if expected != found:
                self.stream.write(
                    f"MISMATCH {name}: recursion={expected} {label}={found}\n"
                )
                return EXIT_MISMATCH
            self.stream.write(f"{name}: recursion={expected} {label}={found}\n")
        return EXIT_OK

    def cmd_verify(self) -> int:
        args = self.args
        sector = SectorIndex(args.n, args.l)
        table = self.build_table(args.n, args.l)
        self.stream.write(f"Sector N={args.n} L={args.l} oracle={args.oracle}\n")

        if args.oracle == "cg":
            found = oracle.oracle_multiplicities(sector, cap=args.cap_compositions)
            code = self._compare(sector, table, "cg", found)
        elif args.oracle == "weight":
            found = oracle.weight_multiplicities(sector)
            code = self._compare(sector, table, "weight", found)
        elif args.oracle == "triple":
            found = multiplicity.triple_sum(table, sector)
            code = self._compare(sector, table, "triple", found)
        elif args.oracle == "character":
            code = self._verify_character(sector, table)
        else:
            code = self._verify_commutant(sector, table)

        self.stream.write("PASS\n" if code == EXIT_OK else "FAIL\n")
        return code

    def _verify_character(self, sector: SectorIndex, table: MultiplicityTable) -> int:
        args = self.args
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.samples):
            omega = channel.haar_sample_su2(rng)
            residual = channel.character_check(
                sector, table, omega, cap=args.cap_sector_dim
            )
            worst = max(worst, residual)

        self.stream.write(
            f"max character residual {worst:.3e} over {args.samples} samples\n"
        )
        return EXIT_OK if worst < channel.TAU_CHAR else EXIT_MISMATCH

    def _verify_commutant(self, sector: SectorIndex, table: MultiplicityTable) -> int:
        args = self.args
        found = channel.commutant_dimension(
            sector, args.samples, args.seed, cap=args.cap_commutant_dim
        )
        expected = channel.expected_commutant_dimension(table, sector)
        squares = " + ".join(
            f"{multiplicity.k_value(table, sector, s.two_j)}^2"
            for s in reversed(valid_spins(sector))
        )
        self.stream.write(f"commutant dimension {found}, expected {expected} = {squares}\n")
        return EXIT_OK if found == expected else EXIT_MISMATCH

    def dispatch(self) -> int:
        commands = {
            "table": self.cmd_table,
            "verify": self.cmd_verify,
            "grid": self.cmd_grid,
            "best": self.cmd_best,
        }
        return commands[self.args.command]()

    @classmethod
    def parse(cls, args: list[str] | None = None) -> argparse.Namespace:
        common = argparse.ArgumentParser(add_help=False)
        group = common.add_argument_group("Options")
        group.add_argument("--debug", action="store_true", help="Verbose logging")
        group.add_argument(
            "--log-file",
            default=None,
            metavar="FILE",
            help="Write the log additionally into this file",
        )
        group.add_argument(
            "--output",
            default=None,
            metavar="FILE",
            help="Write the result into this file instead of stdout",
        )

        group = common.add_argument_group("Limits")
        group.add_argument(
            "--cap-compositions",
            metavar="COUNT",
            type=utils.convert_size,
            default=os.environ.get("DFS_CAP_COMPOSITIONS", "1M"),
            help="Maximum number of compositions enumerated by the CG oracle. Can "
            "also be set using the environment variable DFS_CAP_COMPOSITIONS. "
            "Default is %(default)s",
        )
        group.add_argument(
            "--cap-sector-dim",
            metavar="COUNT",
            type=utils.convert_size,
            default=os.environ.get("DFS_CAP_SECTOR_DIM", "5000"),
            help="Maximum dimension of an enumerated sector basis. Can also be "
            "set using the environment variable DFS_CAP_SECTOR_DIM. "
            "Default is %(default)s",
        )
        group.add_argument(
            "--cap-commutant-dim",
            metavar="COUNT",
            type=utils.convert_size,
            default=os.environ.get("DFS_CAP_COMMUTANT_DIM", "60"),
            help="Maximum sector dimension for the commutant rank. Can also be "
            "set using the environment variable DFS_CAP_COMMUTANT_DIM. "
            "Default is %(default)s",
        )
        group.add_argument(
            "--cap-table",
            metavar="COUNT",
            type=utils.convert_size,
            default=os.environ.get("DFS_CAP_TABLE_ENTRIES", "10M"),
            help="Maximum number of table entries. Can also be set using the "
            "environment variable DFS_CAP_TABLE_ENTRIES. Default is %(default)s",
        )

        parser = argparse.ArgumentParser(
            prog="dfs_channel",
            description="Dimensions of decoherence-free subsystems of a "
            "collectively depolarizing bosonic channel",
        )
        parser.add_argument(
            "--version", action="version", version=f"%(prog)s {utils.VERSION}"
        )
        sub = parser.add_subparsers(dest="command", required=True)

        table = sub.add_parser(
            "table", parents=[common], help="Export the multiplicity table"
        )
        table.add_argument("--n", type=utils.positive_int, required=True)
        table.add_argument("--l-max", type=utils.non_negative_int, required=True)
        table.add_argument("--format", choices=export.FORMATS, default="csv")

        best = sub.add_parser(
            "best",
            parents=[common],
            help="Export the largest multiplicity per L for N uses",
        )
        best.add_argument("--n", type=utils.positive_int, required=True)
        best.add_argument("--l-max", type=utils.non_negative_int, required=True)
        best.add_argument("--format", choices=export.FORMATS, default="csv")

        verify = sub.add_parser(
            "verify",
            parents=[common],
            help="Compare the recursion with an independent oracle",
        )
        verify.add_argument("--n", type=utils.positive_int, required=True)
        verify.add_argument("--l", type=utils.non_negative_int, required=True)
        verify.add_argument("--oracle", choices=ORACLES, default="cg")
        verify.add_argument("--seed", type=int, default=0)
        verify.add_argument(
            "--samples",
            type=utils.positive_int,
            default=channel.DEFAULT_SAMPLES,
            help="Haar samples for the character and commutant oracles. "
            "Default is %(default)s",
        )

        grid = sub.add_parser(
            "grid", parents=[common], help="Export the summation grid of the recursion"
        )
        grid.add_argument("--n", type=utils.positive_int, default=2)
        grid.add_argument("--l", type=utils.non_negative_int, required=True)
        grid.add_argument("--two-j", type=utils.non_negative_int, default=None)
        grid.add_argument(
            "--three-d",
            action="store_true",
            help="Export the (L', j', j) grid and its enclosing tetrahedron",
        )
        grid.add_argument("--format", choices=export.FORMATS, default="csv")

        parsed = parser.parse_args(args)
        if parsed.command == "verify" and parsed.oracle == "commutant":
            if parsed.samples < 2:
                parser.error("the commutant oracle needs at least 2 samples")
        return parsed


def run(args: argparse.Namespace, stream: TextIO | None = None) -> int:
    """Execute the parsed command and map failures to exit codes"""
    with ExitStack() as stack:
        if stream is None:
            if args.output:
                try:
                    stream = stack.enter_context(
                        open(args.output, "w", encoding="utf-8", newline="\n")
                    )
                except OSError as e:
                    sys.stderr.write(f"error: cannot write {args.output}: {e}\n")
                    return EXIT_USAGE
            else:
                stream = sys.stdout

        try:
            return CLI(args, stream).dispatch()
        except ResourceCapError as e:
            sys.stderr.write(f"error: {e}\n")
            return EXIT_RESOURCE
        except ValueError as e:
            sys.stderr.write(f"error: {e}\n")
            return EXIT_USAGE
