import { TrainerStore } from "./state.js";
import { mountApp } from "./ui.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const store = new TrainerStore();
mountApp(root, store);
void store.loadCatalog();
