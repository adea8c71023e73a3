int placeholder_acceptance_main;
