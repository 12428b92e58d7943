import { buildApp } from './dom.js';
import { Store } from './store.js';

const root = document.getElementById('app');
if (!root) throw new Error('missing #app root');

const store = new Store();
buildApp(root, store);

void store.init();
void store.loadGrid(33);
