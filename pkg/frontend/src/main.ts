import { ApiClient } from './api.js';
import { WorkspaceController } from './workspace.js';

const root = document.getElementById('app');
if (root) {
  void new WorkspaceController(root, new ApiClient()).init();
}
