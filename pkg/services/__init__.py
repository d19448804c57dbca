# Report assembly services
