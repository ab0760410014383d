// End-to-end parity: the values the console displays must equal the
// CLI's JSON output field-for-field for the same scenario and seed.
// Requires the Python package (spawns the API server and the CLI).
import assert from "node:assert/strict";
import { spawn, spawnSync } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { after, before, test } from "node:test";
import { ApiClient, ApiError } from "../src/api.js";
import { ConsoleState } from "../src/state.js";
const PYTHON = process.env.PYTHON ?? "python3";
const REPO = join(dirname(fileURLToPath(import.meta.url)), "..", "..");
let server = null;
let client;
function startServer() {
    return new Promise((resolve, reject) => {
        server = spawn(PYTHON, ["-m", "warbench.cli", "serve", "--bind", "127.0.0.1:0"], {
            cwd: REPO,
        });
        const timer = setTimeout(() => reject(new Error("server start timeout")), 30000);
        let buffer = "";
        server.stdout.on("data", (chunk) => {
            buffer += chunk.toString();
            const match = buffer.match(/listening on (http:\/\/[\d.]+:\d+)\//);
            if (match) {
                clearTimeout(timer);
                resolve(match[1]);
            }
        });
        server.stderr.on("data", () => { });
        server.on("error", reject);
        server.on("exit", (code) => reject(new Error(`server exited early: ${code}`)));
    });
}
function runCli(args) {
    const proc = spawnSync(PYTHON, ["-m", "warbench.cli", ...args], {
        cwd: REPO,
        encoding: "utf-8",
        timeout: 240000,
    });
    assert.equal(proc.status, 0, proc.stderr);
    return proc.stdout;
}
const FAST_OPTIMIZER = { max_iters: 60, mc_paths: 64 };
before(async () => {
    const base = await startServer();
    client = new ApiClient(base);
});
after(() => {
    server?.kill();
});
test("defaults load and validate clean in the console", async () => {
    const defaults = await client.defaults();
    const state = new ConsoleState(defaults);
    assert.deepEqual(state.errors(), []);
    assert.equal(state.config.initial.B0, 100);
});
test("console optimize equals CLI optimize field-for-field", async () => {
    const defaults = await client.defaults();
    const config = structuredClone(defaults);
    config.optimizer = { ...config.optimizer, ...FAST_OPTIMIZER };
    const tmp = mkdtempSync(join(tmpdir(), "warbench-parity-"));
    const configPath = join(tmp, "scenario.json");
    writeFileSync(configPath, JSON.stringify(config));
    const cliResult = JSON.parse(runCli(["optimize", "--config", configPath, "--paths", "200"]));
    const state = new ConsoleState(config);
    const token = state.begin("optimize");
    const apiResult = await client.optimize(structuredClone(state.config), 200);
    assert.ok(state.settle("optimize", token, apiResult));
    const shown = state.results.optimize;
    assert.equal(shown.optimal_pi, cliResult.optimal_pi);
    assert.deepEqual(shown.objective, cliResult.objective);
    assert.deepEqual(shown.worstcase, cliResult.worstcase);
    assert.deepEqual(shown, cliResult);
});
test("reserve-only preferences drive the displayed optimum to the floor", async () => {
    const defaults = await client.defaults();
    const config = structuredClone(defaults);
    config.preferences.theta = [0, 0, 1];
    config.optimizer = { ...config.optimizer, ...FAST_OPTIMIZER };
    const result = await client.optimize(config);
    assert.equal(result.optimal_pi, config.optimizer.pi_floor);
});
test("validation mirror matches the server's 400 behaviour", async () => {
    const defaults = await client.defaults();
    const state = new ConsoleState(defaults);
    state.config.weights = [0.5, 0.6];
    // the console refuses to submit ...
    const clientErrors = state.errors();
    assert.ok(clientErrors.some((e) => e.field === "weights"));
    // ... and had it submitted anyway, the server would refuse identically
    try {
        await client.simulate(state.config, 16, 0.5);
        assert.fail("server accepted an off-simplex weight vector");
    }
    catch (error) {
        assert.ok(error instanceof ApiError);
        assert.equal(error.status, 400);
        assert.ok(error.errors.some((e) => e.field === "config.weights"));
    }
});
test("off-simplex theta is refused on both sides", async () => {
    const defaults = await client.defaults();
    const state = new ConsoleState(defaults);
    state.config.preferences.theta = [0.9, 0.3, 0.1];
    assert.ok(state.errors().some((e) => e.field === "preferences.theta"));
    try {
        await client.optimize(state.config);
        assert.fail("server accepted an off-simplex theta");
    }
    catch (error) {
        assert.ok(error instanceof ApiError);
        assert.equal(error.status, 400);
        assert.ok(error.errors.some((e) => e.field === "config.preferences.theta"));
    }
});
test("seed changes Monte Carlo bands but not enumeration values", async () => {
    const defaults = await client.defaults();
    const configA = { ...structuredClone(defaults), seed: 1 };
    const configB = { ...structuredClone(defaults), seed: 2 };
    const [sweepA, sweepB] = await Promise.all([
        client.sweep(configA, 11),
        client.sweep(configB, 11),
    ]);
    // enumeration backend: identical objective values despite the seeds
    assert.deepEqual(sweepA.points.map((p) => p.objective), sweepB.points.map((p) => p.objective));
    const [simA, simB] = await Promise.all([
        client.simulate(configA, 64, 0.7),
        client.simulate(configB, 64, 0.7),
    ]);
    assert.notDeepEqual(simA.fan.B.mean, simB.fan.B.mean);
});
