# Command routing for the workbench CLI
