// Console state: the scenario being edited, the latest result per
// action, and request sequencing. At most one request per action kind
// is in flight; responses that lost a race are discarded.
import { validateScenario } from "./validate.js";
export class ConsoleState {
    constructor(defaults) {
        this.results = {};
        this.counters = {
            simulate: 0,
            optimize: 0,
            aggregate: 0,
            sweep: 0,
        };
        this.inFlight = {
            simulate: null,
            optimize: null,
            aggregate: null,
            sweep: null,
        };
        this.config = structuredClone(defaults);
    }
    /** Validation mirror: empty list means the server would accept it. */
    errors() {
        return validateScenario(this.config);
    }
    isValid() {
        return this.errors().length === 0;
    }
    isBusy(kind) {
        return this.inFlight[kind] !== null;
    }
    /**
     * Claim the right to send a request; null means one is already in
     * flight (the caller should keep the action disabled).
     */
    begin(kind) {
        if (this.inFlight[kind] !== null) {
            return null;
        }
        const token = ++this.counters[kind];
        this.inFlight[kind] = token;
        return token;
    }
    /** Record a response; false means it was stale and must be dropped. */
    settle(kind, token, result) {
        if (this.inFlight[kind] !== token) {
            return false;
        }
        this.inFlight[kind] = null;
        this.results[kind] = result;
        return true;
    }
    /** Release the in-flight slot after a failed request. */
    abort(kind, token) {
        if (this.inFlight[kind] === token) {
            this.inFlight[kind] = null;
        }
    }
}
