// Thin bindings over the `grits` command-line tool. Tables go out as the
// tool's native JSON, scores come back from its report; nothing is
// recomputed on this side, so results are bit-for-bit the CLI's.

import { execFile } from "node:child_process";
import { mkdir, mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";

const execFileAsync = promisify(execFile);

export type BoundCell = {
    /** inclusive [start, end] grid row range */
    rows: [number, number],
    /** inclusive [start, end] grid column range */
    cols: [number, number],
    text?: string,
    /** [x1, y1, x2, y2] */
    bbox?: [number, number, number, number],
    is_header?: boolean,
};

export type BoundTable = {
    id?: string,
    n_rows: number,
    n_cols: number,
    cells: BoundCell[],
};

/** per metric: [fscore, precision, recall], or a bare number for teds-con */
export type TableScores = Record<string, [number, number, number] | number>;

/** CLI rejected the input; `tableIndex` names the offending table when known */
export class TableValidationError extends Error {
    readonly tableIndex: number | null;

    constructor(message: string, tableIndex: number | null) {
        super(message);
        this.name = "TableValidationError";
        this.tableIndex = tableIndex;
    }
}

// override with GRITS_CLI, e.g. "python3 -m grits.cli"
function cliCommand(): string[] {
    const override = process.env.GRITS_CLI;
    return override ? override.trim().split(/\s+/) : ["grits"];
}

async function runCli(args: string[]): Promise<string> {
    const [cmd, ...prefix] = cliCommand();
    try {
        const { stdout } = await execFileAsync(cmd, [...prefix, ...args],
            { maxBuffer: 64 * 1024 * 1024 });
        return stdout;
    } catch (err) {
        const stderr = String((err as { stderr?: string }).stderr ?? err);
        // table files are written as <zero-padded index>.json, so an error
        // message naming a file pins down which table was bad
        const m = stderr.match(/(\d{6})\.json/);
        throw new TableValidationError(stderr.trim(),
            m ? parseInt(m[1], 10) : null);
    }
}

const stem = (i: number): string => String(i).padStart(6, "0");

async function writeTables(dir: string, tables: BoundTable[]): Promise<void> {
    await mkdir(dir);
    await Promise.all(tables.map((t, i) =>
        writeFile(join(dir, `${stem(i)}.json`),
            JSON.stringify({ ...t, id: stem(i) }))));
}

/**
 * Score each prediction against its ground truth. Tables are plain
 * objects in the toolkit's JSON shape; `metrics` defaults to all of
 * them. Returns one score mapping per pair, in input order.
 */
export async function evaluateBatch(
    gtTables: BoundTable[],
    predTables: BoundTable[],
    metrics?: string[],
): Promise<TableScores[]> {
    if (gtTables.length !== predTables.length) {
        throw new RangeError(
            `gt has ${gtTables.length} tables but pred has ${predTables.length}`);
    }
    if (gtTables.length === 0) {
        return [];
    }
    const root = await mkdtemp(join(tmpdir(), "grits-bind-"));
    try {
        const gtDir = join(root, "gt");
        const predDir = join(root, "pred");
        await writeTables(gtDir, gtTables);
        await writeTables(predDir, predTables);
        const reportPath = join(root, "report.json");
        const args = ["eval", "--gt", gtDir, "--pred", predDir,
            "--out", reportPath];
        if (metrics) {
            args.push("--metrics", metrics.join(","));
        }
        await runCli(args);
        const report = JSON.parse(await readFile(reportPath, "utf8")) as {
            tables: { id: string, metrics: TableScores }[],
        };
        // report order is sorted by file stem, which is input order here
        return report.tables.map((t) => t.metrics);
    } finally {
        await rm(root, { recursive: true, force: true });
    }
}

/** core toolkit version, identical to what `grits --version` reports */
export async function versionInfo(): Promise<string> {
    const stdout = await runCli(["--version"]);
    const parts = stdout.trim().split(/\s+/);
    return parts[parts.length - 1];
}
