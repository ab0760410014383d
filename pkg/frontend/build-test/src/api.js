// Thin JSON client for the compute API. The console performs no model
// math of its own; every number it renders comes from these calls.
export class ApiError extends Error {
    constructor(status, errors) {
        super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
        this.status = status;
        this.errors = errors;
    }
}
async function post(base, path, body) {
    const response = await fetch(`${base}${path}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
    });
    if (!response.ok) {
        const payload = await response.json().catch(() => ({}));
        const errors = payload.errors ?? [{ field: "$", message: payload.error ?? `HTTP ${response.status}` }];
        throw new ApiError(response.status, errors);
    }
    return response.json();
}
export class ApiClient {
    constructor(base = "") {
        this.base = base;
    }
    async health() {
        const response = await fetch(`${this.base}/api/health`);
        return response.json();
    }
    async defaults() {
        const response = await fetch(`${this.base}/api/defaults`);
        if (!response.ok) {
            throw new ApiError(response.status, [{ field: "$", message: "defaults unavailable" }]);
        }
        return response.json();
    }
    simulate(config, paths, pi) {
        return post(this.base, "/api/simulate", { config, paths, pi });
    }
    optimize(config, paths) {
        return post(this.base, "/api/optimize", paths ? { config, paths } : { config });
    }
    aggregate(config, pi) {
        return post(this.base, "/api/aggregate", pi === undefined ? { config } : { config, pi });
    }
    sweep(config, gridPoints) {
        return post(this.base, "/api/sweep", { config, grid_points: gridPoints });
    }
}
